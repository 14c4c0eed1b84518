#include "spamlab/error.hpp"
#include "spamlab/naive_bayes.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spamlab;

namespace {

TrainingSet two_class(std::vector<std::vector<double>> rows, std::vector<std::size_t> labels) {
    return TrainingSet{std::move(rows), std::move(labels), {"A", "B"}};
}

NbModel one_feature(double mean_a, double mean_b) {
    NbModel m;
    m.classes = {"A", "B"};
    m.priors = {0.5, 0.5};
    m.params = {{{mean_a, 1.0}}, {{mean_b, 1.0}}};
    m.feature_count = 1;
    return m;
}

}  // namespace

TEST_SUITE("naive_bayes") {

TEST_CASE("priors by counting") {
    const auto data = two_class({{0}, {0}, {0}, {1}}, {1, 1, 1, 0});
    const auto m = nb_fit(data, NbConfig{1e-6, 0.0});
    CHECK(m.priors[0] == 0.25);
    CHECK(m.priors[1] == 0.75);
}

TEST_CASE("smoothed priors with one sample each") {
    const auto m = nb_fit(two_class({{1}, {2}}, {0, 1}), NbConfig{1e-6, 1.0});
    CHECK(m.priors[0] == 0.5);
    CHECK(m.priors[1] == 0.5);
}

TEST_CASE("zero variance is clamped to the floor") {
    const auto m = nb_fit(two_class({{0}, {0}, {1}, {3}}, {0, 0, 1, 1}), NbConfig{0.125, 1.0});
    CHECK(m.params[0][0].variance == 0.125);
    CHECK(m.params[1][0].mean == 2.0);
    CHECK(m.params[1][0].variance == 1.0);  // population variance
}

TEST_CASE("fit rejects bad input") {
    CHECK_THROWS_AS(nb_fit(two_class({{0}, {1}}, {0, 0})), Error);
    try {
        nb_fit(two_class({{0}, {1}}, {0, 0}));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyClass);
    }
    CHECK_THROWS_AS(nb_fit(two_class({{0}, {1, 2}}, {0, 1})), Error);
    CHECK_THROWS_AS(nb_fit(two_class({{0}, {1}}, {0, 1}), NbConfig{0.0, 1.0}), Error);
    CHECK_THROWS_AS(nb_fit(two_class({{0}, {1}}, {0, 1}), NbConfig{1e-6, -1.0}), Error);
}

TEST_CASE("symmetric model at the midpoint") {
    const std::vector<double> x{5.0};
    const auto p = nb_posterior(one_feature(0, 10), x);
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(nb_predict(one_feature(0, 10), x) == 0);  // tie goes to the first class
}

TEST_CASE("ten sigma separation") {
    const std::vector<double> x{0.0};
    const auto p = nb_posterior(one_feature(0, 10), x);
    CHECK(std::abs(p[0] - 1.0) < 1e-9);
}

TEST_CASE("four sample training set against the product form") {
    const auto data = two_class({{1.0, 2.0}, {1.5, 1.0}, {4.0, 5.0}, {5.0, 4.5}}, {0, 0, 1, 1});
    const auto m = nb_fit(data);
    for (const auto& x : std::vector<std::vector<double>>{{1.2, 1.6}, {3.0, 3.0}, {4.4, 4.9}, {-1, 8}}) {
        const auto p = nb_posterior(m, x);
        const auto q = test::product_form_posterior(m, x);
        for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(p[c] - q[c]) <= 1e-9 * q[c]);
    }
}

TEST_CASE("random models against the product form") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> input(0.0, 2.0);
    for (int round = 0; round < 200; ++round) {
        const auto m = test::random_nb_model(rng);
        std::vector<double> x(m.feature_count);
        for (auto& v : x) v = input(rng);
        const auto p = nb_posterior(m, x);
        const auto q = test::product_form_posterior(m, x);
        double sum = 0.0;
        for (std::size_t c = 0; c < p.size(); ++c) {
            CHECK(std::abs(p[c] - q[c]) <= 1e-9 * q[c]);
            sum += p[c];
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
}

TEST_CASE("log scores decompose into prior and likelihood terms") {
    std::mt19937_64 rng(4);
    const auto m = test::random_nb_model(rng);
    const std::vector<double> x(m.feature_count, 0.3);
    const auto scores = nb_log_scores(m, x);
    const auto terms = nb_log_likelihood_terms(m, x);
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        double s = std::log(m.priors[c]);
        for (const auto t : terms[c]) s += t;
        CHECK(s == doctest::Approx(scores[c]).epsilon(1e-14));
    }
}

TEST_CASE("far outliers do not underflow") {
    const auto m = one_feature(0, 1);
    const std::vector<double> x{1e4};
    const auto p = nb_posterior(m, x);
    CHECK(std::isfinite(p[0]));
    CHECK(p[1] == 1.0);
    CHECK(nb_predict(m, x) == 1);
}

TEST_CASE("argmax tie rule and invariance") {
    const std::vector<double> tie{0.5, 0.5};
    const std::vector<double> skew{0.9, 0.1};
    CHECK(argmax(tie) == 0);
    CHECK(argmax(skew) == 0);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> s{u(rng), u(rng), u(rng)};
        const auto before = argmax(s);
        const double k = 0.01 + 10 * u(rng);
        for (auto& v : s) v *= k;
        CHECK(argmax(s) == before);
    }
}

TEST_CASE("dimension mismatch") {
    const std::vector<double> x{1.0, 2.0};
    CHECK_THROWS_AS(nb_posterior(one_feature(0, 1), x), Error);
}

TEST_CASE("learner separates blobs") {
    const auto data = test::gaussian_blobs(50, 3, 6.0, 2);
    const NaiveBayesLearner learner;
    const auto model = learner.fit(data);
    std::size_t right = 0;
    for (std::size_t i = 0; i < data.size(); ++i) right += model->predict(data.rows[i]) == data.labels[i];
    CHECK(right >= 98);
    CHECK(learner.name() == "naive_bayes");
}

}
