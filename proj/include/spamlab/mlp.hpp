#pragma once

#include "spamlab/training_set.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spamlab {

struct MlpConfig {
    /// 0 selects ceil((n_features + n_classes) / 2).
    std::size_t hidden_units = 0;
    double learning_rate = 0.3;
    double momentum = 0.2;
    std::size_t epochs = 500;
    std::uint64_t seed = 1;
    double scale_low = -1.0;
    double scale_high = 1.0;
};

void validate(const MlpConfig& config);

struct FeatureRange {
    double min = 0.0;
    double max = 0.0;

    bool operator==(const FeatureRange&) const = default;
};

/// One-hidden-layer sigmoid network. The bias weights are the last column of
/// each weight matrix.
struct MlpModel {
    Eigen::MatrixXd w_hidden;  // hidden_units x (n_features + 1)
    Eigen::MatrixXd w_out;     // n_classes x (hidden_units + 1)
    std::vector<FeatureRange> scaling;
    double scale_low = -1.0;
    double scale_high = 1.0;
    std::vector<std::string> classes;

    std::size_t feature_count() const { return scaling.size(); }
    std::size_t hidden_units() const { return static_cast<std::size_t>(w_hidden.rows()); }

    bool operator==(const MlpModel& other) const;
};

struct MlpGradient {
    Eigen::MatrixXd d_hidden;
    Eigen::MatrixXd d_out;
};

struct MlpPrediction {
    std::size_t label = 0;
    std::vector<double> activations;
};

double sigmoid(double z);

/// Min-max scales x with the model's training ranges. Constant features map
/// to the midpoint of the target interval.
Eigen::VectorXd scale_input(const MlpModel& model, std::span<const double> x);

/// Seeded initial network: scaling fitted to `data`, weights uniform in [-0.5, 0.5].
MlpModel mlp_initialize(const TrainingSet& data, const MlpConfig& config);

/// Per-sample SGD with momentum on squared error for exactly config.epochs passes.
MlpModel mlp_train(const TrainingSet& data, const MlpConfig& config = {});

MlpPrediction mlp_predict(const MlpModel& model, std::span<const double> x);

/// Gradient of 0.5 * sum((out - target)^2) with respect to both weight matrices.
MlpGradient mlp_gradient(const MlpModel& model, std::span<const double> x, std::span<const double> target);

/// 0.5 * sum((out - target)^2).
double mlp_loss(const MlpModel& model, std::span<const double> x, std::span<const double> target);

class MlpLearner final : public Learner {
public:
    explicit MlpLearner(MlpConfig config = {}) : config_(config) {}
    std::unique_ptr<Classifier> fit(const TrainingSet& data) const override;
    std::string name() const override { return "mlp"; }

private:
    MlpConfig config_;
};

}  // namespace spamlab
