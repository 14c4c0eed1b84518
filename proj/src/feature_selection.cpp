#include "spamlab/feature_selection.hpp"

#include "spamlab/error.hpp"
#include "spamlab/evaluation.hpp"
#include "spamlab/parallel.hpp"

#include <algorithm>
#include <set>

namespace spamlab {

namespace {

struct Node {
    std::vector<std::size_t> indices;
    double merit = 0.0;
};

struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
        return ranks_before(a.merit, a.indices, b.merit, b.indices);
    }
};

}  // namespace

double evaluate_subset(const TrainingSet& data, std::span<const std::size_t> subset, const WrapperEvaluator& evaluator) {
    if (evaluator.learner == nullptr) throw Error(ErrorCode::InvalidArgument, "wrapper evaluator has no learner");
    const TrainingSet projected = data.select_features(subset);
    CvOptions cv;
    cv.k = evaluator.k_folds;
    cv.seed = evaluator.seed;
    return cross_validate(*evaluator.learner, projected, cv).accuracy;
}

double majority_rate(const TrainingSet& data) {
    if (data.size() == 0) throw Error(ErrorCode::TooFewSamples, "dataset is empty");
    const auto counts = class_counts(data);
    const auto top = *std::max_element(counts.begin(), counts.end());
    return static_cast<double>(top) / static_cast<double>(data.size());
}

bool ranks_before(double merit_a, std::span<const std::size_t> a, double merit_b, std::span<const std::size_t> b) {
    if (merit_a != merit_b) return merit_a > merit_b;
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

FeatureSubset best_first_forward(const TrainingSet& data, const SearchConfig& config) {
    validate(data);
    if (config.stale_limit < 1) throw Error(ErrorCode::InvalidArgument, "stale_limit must be at least 1");
    if (data.classes.size() < 2) throw Error(ErrorCode::EmptyClass, "at least two classes are required");
    const std::size_t n = data.dimension();
    if (n == 0) throw Error(ErrorCode::InvalidSubset, "dataset has no features");
    const std::size_t budget = config.max_evaluations > 0 ? config.max_evaluations : 10 * n * n;

    FeatureSubset result;
    result.baseline_merit = majority_rate(data);

    Node best{{}, result.baseline_merit};
    std::set<Node, NodeOrder> open{best};
    std::set<std::vector<std::size_t>> visited{best.indices};
    std::size_t stale = 0;

    while (!open.empty() && stale < config.stale_limit) {
        const Node node = *open.begin();
        open.erase(open.begin());

        std::vector<std::vector<std::size_t>> candidates;
        for (std::size_t f = 1; f <= n; ++f) {
            if (std::binary_search(node.indices.begin(), node.indices.end(), f)) continue;
            auto child = node.indices;
            child.insert(std::upper_bound(child.begin(), child.end(), f), f);
            if (visited.insert(child).second) candidates.push_back(std::move(child));
        }
        const std::size_t remaining = budget - result.evaluations_used;
        if (candidates.size() > remaining) {
            candidates.resize(remaining);
            result.budget_exhausted = true;
        }

        const auto merits = parallel_map(candidates.size(), config.jobs, [&](std::size_t i) {
            return evaluate_subset(data, candidates[i], config.evaluator);
        });
        result.evaluations_used += candidates.size();

        bool improved = false;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            result.log.push_back({candidates[i], merits[i]});
            Node child{std::move(candidates[i]), merits[i]};
            if (ranks_before(child.merit, child.indices, best.merit, best.indices)) {
                best = child;
                improved = true;
            }
            open.insert(std::move(child));
        }
        stale = improved ? 0 : stale + 1;
        if (result.budget_exhausted || result.evaluations_used >= budget) {
            result.budget_exhausted = result.budget_exhausted || !open.empty();
            break;
        }
    }

    result.indices = best.indices;
    result.merit = best.merit;
    result.baseline_only = best.indices.empty();
    return result;
}

}  // namespace spamlab
