#pragma once

#include "spamlab/training_set.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace spamlab {

/// Scores a subset by the cross-validated accuracy of `learner` on it.
struct WrapperEvaluator {
    const Learner* learner = nullptr;
    std::size_t k_folds = 10;
    std::uint64_t seed = 1;
};

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

struct SearchConfig {
    /// Consecutive expansions without a new global best before stopping.
    std::size_t stale_limit = 5;
    WrapperEvaluator evaluator;
    /// 0 selects 10 * n_features^2.
    std::size_t max_evaluations = 0;
    /// Worker cap for the candidate evaluations of one expansion.
    std::size_t jobs = 1;
};

struct EvaluatedSubset {
    std::vector<std::size_t> indices;
    double merit = 0.0;

    bool operator==(const EvaluatedSubset&) const = default;
};

struct FeatureSubset {
    /// Sorted 1-based indices. Empty only when no subset beat the
    /// majority-class baseline (see `baseline_only`).
    std::vector<std::size_t> indices;
    double merit = 0.0;
    std::size_t evaluations_used = 0;
    bool budget_exhausted = false;
    bool baseline_only = false;
    double baseline_merit = 0.0;
    /// Every subset evaluated, in evaluation order.
    std::vector<EvaluatedSubset> log;

    bool operator==(const FeatureSubset&) const = default;
};

double evaluate_subset(const TrainingSet& data, std::span<const std::size_t> subset, const WrapperEvaluator& evaluator);

/// Fraction of samples in the most frequent class; the merit of the empty set.
double majority_rate(const TrainingSet& data);

/// True if (merit_a, a) ranks ahead of (merit_b, b): higher merit first, then
/// fewer features, then lexicographically smaller indices.
bool ranks_before(double merit_a, std::span<const std::size_t> a, double merit_b, std::span<const std::size_t> b);

/// Best-first forward search from the empty set.
FeatureSubset best_first_forward(const TrainingSet& data, const SearchConfig& config);

}  // namespace spamlab
