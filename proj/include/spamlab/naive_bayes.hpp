#pragma once

#include "spamlab/training_set.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace spamlab {

struct NbConfig {
    double variance_floor = 1e-6;
    /// Laplace-style additive smoothing of class priors.
    double prior_smoothing = 1.0;
};

struct Gaussian {
    double mean = 0.0;
    double variance = 1.0;

    bool operator==(const Gaussian&) const = default;
};

/// Gaussian naive Bayes over numeric features: one prior per class and one
/// (mean, variance) pair per class and feature.
struct NbModel {
    std::vector<std::string> classes;
    std::vector<double> priors;
    std::vector<std::vector<Gaussian>> params;  // [class][feature]
    std::size_t feature_count = 0;

    bool operator==(const NbModel&) const = default;
};

NbModel nb_fit(const TrainingSet& data, const NbConfig& config = {});

/// Normalised P(class | x), computed in log space.
std::vector<double> nb_posterior(const NbModel& model, std::span<const double> x);

/// Unnormalised log P(class) + sum_j log N(x_j; mean, variance) per class.
std::vector<double> nb_log_scores(const NbModel& model, std::span<const double> x);

/// Per-class, per-feature log-density addends of nb_log_scores (prior excluded).
std::vector<std::vector<double>> nb_log_likelihood_terms(const NbModel& model, std::span<const double> x);

std::size_t nb_predict(const NbModel& model, std::span<const double> x);

double log_normal_density(double x, const Gaussian& g);

class NaiveBayesLearner final : public Learner {
public:
    explicit NaiveBayesLearner(NbConfig config = {}) : config_(config) {}
    std::unique_ptr<Classifier> fit(const TrainingSet& data) const override;
    std::string name() const override { return "naive_bayes"; }

private:
    NbConfig config_;
};

}  // namespace spamlab
