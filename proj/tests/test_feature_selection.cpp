#include "spamlab/error.hpp"
#include "spamlab/feature_selection.hpp"
#include "spamlab/naive_bayes.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace spamlab;

namespace {

const NaiveBayesLearner kNb;

SearchConfig unlimited(std::size_t k = 5) {
    SearchConfig c;
    c.stale_limit = kUnlimited;
    c.max_evaluations = kUnlimited;
    c.evaluator = WrapperEvaluator{&kNb, k, 1};
    return c;
}

TrainingSet noise_only(std::size_t per_class, std::size_t dim, std::uint64_t seed) {
    return test::planted_features(per_class, dim, {}, 1.0, seed);
}

}  // namespace

TEST_SUITE("feature_selection") {

TEST_CASE("feature equal to the label has merit 1") {
    auto data = test::planted_features(20, 2, {1}, 0.0, 1);
    const std::vector<std::size_t> subset{1};
    CHECK(evaluate_subset(data, subset, WrapperEvaluator{&kNb, 10, 1}) == 1.0);
}

TEST_CASE("pure noise averages near one half") {
    double sum = 0.0;
    const std::vector<std::size_t> subset{1};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        sum += evaluate_subset(noise_only(20, 1, seed + 100), subset, WrapperEvaluator{&kNb, 10, seed});
    }
    const double mean = sum / 50.0;
    CHECK(mean >= 0.4);
    CHECK(mean <= 0.6);
}

TEST_CASE("merit is deterministic") {
    const auto data = test::planted_features(20, 4, {2}, 0.8, 3);
    const std::vector<std::size_t> subset{1, 2};
    const WrapperEvaluator e{&kNb, 10, 7};
    CHECK(evaluate_subset(data, subset, e) == evaluate_subset(data, subset, e));
}

TEST_CASE("evaluator without a learner") {
    const auto data = test::planted_features(10, 2, {1}, 0.1, 1);
    const std::vector<std::size_t> subset{1};
    CHECK_THROWS_AS(evaluate_subset(data, subset, WrapperEvaluator{}), Error);
}

TEST_CASE("ranking order") {
    const std::vector<std::size_t> a{1, 2};
    const std::vector<std::size_t> b{3};
    const std::vector<std::size_t> c{1, 3};
    CHECK(ranks_before(0.9, a, 0.8, b));
    CHECK(ranks_before(0.8, b, 0.8, a));  // fewer features
    CHECK(ranks_before(0.8, a, 0.8, c));  // lexicographic
    CHECK_FALSE(ranks_before(0.8, a, 0.8, a));
}

TEST_CASE("one perfect feature among noise") {
    const auto data = test::planted_features(20, 3, {1}, 0.0, 2);
    const auto r = best_first_forward(data, unlimited());
    CHECK(r.indices == std::vector<std::size_t>{1});
    CHECK(r.merit == 1.0);
    CHECK(r.merit == test::exhaustive_best_merit(data, unlimited().evaluator));
}

TEST_CASE("unlimited search matches the exhaustive optimum") {
    std::mt19937_64 rng(31);
    for (std::uint64_t round = 0; round < 6; ++round) {
        const std::size_t dim = 2 + rng() % 5;
        const std::vector<std::size_t> useful{1 + rng() % dim};
        const auto data = test::planted_features(12, dim, useful, 1.2, round);
        const auto config = unlimited(4);
        const auto r = best_first_forward(data, config);
        CAPTURE(round);
        CHECK(r.merit == test::exhaustive_best_merit(data, config.evaluator));
        CHECK(r.evaluations_used == (std::size_t{1} << dim) - 1);
        CHECK_FALSE(r.budget_exhausted);
    }
}

TEST_CASE("stale limit one still never drops below the baseline") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto data = noise_only(15, 4, seed);
        SearchConfig c = unlimited();
        c.stale_limit = 1;
        const auto r = best_first_forward(data, c);
        CHECK(r.merit >= r.baseline_merit);
        CHECK(r.baseline_merit == majority_rate(data));
        if (r.baseline_only) CHECK(r.indices.empty());
    }
}

TEST_CASE("duplicating a selected feature never lowers the merit") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto data = test::planted_features(15, 4, {1, 3}, 0.9, 40 + seed);
        const auto before = best_first_forward(data, unlimited());
        REQUIRE_FALSE(before.indices.empty());
        auto widened = data;
        const auto copied = before.indices.front() - 1;
        for (auto& row : widened.rows) row.push_back(row[copied]);
        const auto after = best_first_forward(widened, unlimited());
        CHECK(after.merit >= before.merit);
        CHECK(std::is_sorted(after.indices.begin(), after.indices.end()));
    }
}

TEST_CASE("budget caps the evaluations") {
    const auto data = test::planted_features(15, 6, {2, 5}, 0.6, 5);
    SearchConfig c = unlimited();
    c.max_evaluations = 8;
    const auto r = best_first_forward(data, c);
    CHECK(r.evaluations_used == 8);
    CHECK(r.budget_exhausted);
    CHECK(r.log.size() == 8);

    SearchConfig d = unlimited();
    d.max_evaluations = 0;  // default budget 10 * n^2
    d.stale_limit = kUnlimited;
    const auto q = best_first_forward(data, d);
    CHECK(q.evaluations_used == 63);
    CHECK_FALSE(q.budget_exhausted);
}

TEST_CASE("log records each subset once") {
    const auto data = test::planted_features(15, 4, {3}, 0.5, 6);
    const auto r = best_first_forward(data, unlimited());
    std::set<std::vector<std::size_t>> seen;
    for (const auto& e : r.log) CHECK(seen.insert(e.indices).second);
    CHECK(seen.size() == r.evaluations_used);
}

TEST_CASE("search is deterministic and thread-count independent") {
    const auto data = test::planted_features(20, 6, {1, 4}, 0.9, 7);
    SearchConfig c;
    c.evaluator = WrapperEvaluator{&kNb, 5, 3};
    const auto a = best_first_forward(data, c);
    CHECK(best_first_forward(data, c) == a);
    c.jobs = 3;
    CHECK(best_first_forward(data, c) == a);
}

TEST_CASE("invalid configuration") {
    const auto data = test::planted_features(10, 2, {1}, 0.1, 1);
    SearchConfig c = unlimited();
    c.stale_limit = 0;
    CHECK_THROWS_AS(best_first_forward(data, c), Error);
    TrainingSet empty_features{{{}, {}}, {0, 1}, {"ham", "spam"}};
    CHECK_THROWS_AS(best_first_forward(empty_features, unlimited()), Error);
}

}
