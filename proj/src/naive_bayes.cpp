#include "spamlab/naive_bayes.hpp"

#include "spamlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace spamlab {

namespace {

void check_dimension(const NbModel& model, std::span<const double> x) {
    if (x.size() != model.feature_count) {
        throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(model.feature_count) +
                                                      " features, got " + std::to_string(x.size()));
    }
}

class NbClassifier final : public Classifier {
public:
    explicit NbClassifier(NbModel model) : model_(std::move(model)) {}
    std::size_t predict(std::span<const double> x) const override { return nb_predict(model_, x); }

private:
    NbModel model_;
};

}  // namespace

NbModel nb_fit(const TrainingSet& data, const NbConfig& config) {
    if (data.classes.size() < 2) throw Error(ErrorCode::EmptyClass, "at least two classes are required");
    if (!(config.variance_floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "variance_floor must be > 0");
    if (config.prior_smoothing < 0.0) throw Error(ErrorCode::InvalidArgument, "prior_smoothing must be >= 0");
    validate(data);

    const auto counts = class_counts(data);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) throw Error(ErrorCode::EmptyClass, "class '" + data.classes[c] + "' has no samples");
    }

    const std::size_t n_classes = data.classes.size();
    const std::size_t dim = data.dimension();
    NbModel model;
    model.classes = data.classes;
    model.feature_count = dim;

    const double denominator =
        static_cast<double>(data.size()) + config.prior_smoothing * static_cast<double>(n_classes);
    for (const auto count : counts) {
        model.priors.push_back((static_cast<double>(count) + config.prior_smoothing) / denominator);
    }

    std::vector<std::vector<double>> sums(n_classes, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j = 0; j < dim; ++j) sums[data.labels[i]][j] += data.rows[i][j];
    }
    std::vector<std::vector<double>> means(n_classes, std::vector<double>(dim, 0.0));
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t j = 0; j < dim; ++j) means[c][j] = sums[c][j] / static_cast<double>(counts[c]);
    }
    std::vector<std::vector<double>> squares(n_classes, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto c = data.labels[i];
        for (std::size_t j = 0; j < dim; ++j) {
            const double d = data.rows[i][j] - means[c][j];
            squares[c][j] += d * d;
        }
    }

    model.params.assign(n_classes, std::vector<Gaussian>(dim));
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double variance = squares[c][j] / static_cast<double>(counts[c]);
            model.params[c][j] = {means[c][j], std::max(variance, config.variance_floor)};
        }
    }
    return model;
}

double log_normal_density(double x, const Gaussian& g) {
    const double d = x - g.mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * g.variance) - d * d / (2.0 * g.variance);
}

std::vector<std::vector<double>> nb_log_likelihood_terms(const NbModel& model, std::span<const double> x) {
    check_dimension(model, x);
    std::vector<std::vector<double>> terms(model.classes.size(), std::vector<double>(x.size()));
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        for (std::size_t j = 0; j < x.size(); ++j) terms[c][j] = log_normal_density(x[j], model.params[c][j]);
    }
    return terms;
}

std::vector<double> nb_log_scores(const NbModel& model, std::span<const double> x) {
    check_dimension(model, x);
    std::vector<double> scores(model.classes.size());
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        double s = std::log(model.priors[c]);
        for (std::size_t j = 0; j < x.size(); ++j) s += log_normal_density(x[j], model.params[c][j]);
        scores[c] = s;
    }
    return scores;
}

std::vector<double> nb_posterior(const NbModel& model, std::span<const double> x) {
    auto scores = nb_log_scores(model, x);
    const double top = *std::max_element(scores.begin(), scores.end());
    double total = 0.0;
    for (auto& s : scores) {
        s = std::exp(s - top);
        total += s;
    }
    for (auto& s : scores) s /= total;
    return scores;
}

std::size_t nb_predict(const NbModel& model, std::span<const double> x) {
    const auto scores = nb_log_scores(model, x);
    return argmax(scores);
}

std::unique_ptr<Classifier> NaiveBayesLearner::fit(const TrainingSet& data) const {
    return std::make_unique<NbClassifier>(nb_fit(data, config_));
}

}  // namespace spamlab
