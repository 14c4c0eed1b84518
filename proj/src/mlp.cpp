#include "spamlab/mlp.hpp"

#include "spamlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace spamlab {

namespace {

struct Forward {
    Eigen::VectorXd input;   // scaled features with trailing bias 1
    Eigen::VectorXd hidden;  // hidden activations with trailing bias 1
    Eigen::VectorXd output;
};

Forward forward(const MlpModel& m, const Eigen::VectorXd& scaled) {
    Forward f;
    const auto n = scaled.size();
    f.input.resize(n + 1);
    f.input.head(n) = scaled;
    f.input(n) = 1.0;
    const Eigen::VectorXd z_hidden = m.w_hidden * f.input;
    const auto h = z_hidden.size();
    f.hidden.resize(h + 1);
    for (Eigen::Index i = 0; i < h; ++i) f.hidden(i) = sigmoid(z_hidden(i));
    f.hidden(h) = 1.0;
    const Eigen::VectorXd z_out = m.w_out * f.hidden;
    f.output = z_out.unaryExpr([](double z) { return sigmoid(z); });
    return f;
}

MlpGradient backward(const MlpModel& m, const Forward& f, const Eigen::VectorXd& target) {
    const Eigen::Index h = m.w_hidden.rows();
    const Eigen::ArrayXd out = f.output.array();
    const Eigen::VectorXd delta_out = ((out - target.array()) * out * (1.0 - out)).matrix();
    const Eigen::ArrayXd hid = f.hidden.head(h).array();
    const Eigen::VectorXd back = m.w_out.leftCols(h).transpose() * delta_out;
    const Eigen::VectorXd delta_hidden = (back.array() * hid * (1.0 - hid)).matrix();
    return {delta_hidden * f.input.transpose(), delta_out * f.hidden.transpose()};
}

void check_dimension(const MlpModel& m, std::size_t n) {
    if (n != m.feature_count()) {
        throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(m.feature_count()) +
                                                      " features, got " + std::to_string(n));
    }
}

Eigen::VectorXd as_target(const MlpModel& m, std::span<const double> target) {
    if (target.size() != m.classes.size()) {
        throw Error(ErrorCode::DimensionMismatch, "target has " + std::to_string(target.size()) +
                                                      " entries, model has " + std::to_string(m.classes.size()) +
                                                      " outputs");
    }
    return Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));
}

class MlpClassifier final : public Classifier {
public:
    explicit MlpClassifier(MlpModel model) : model_(std::move(model)) {}
    std::size_t predict(std::span<const double> x) const override { return mlp_predict(model_, x).label; }

private:
    MlpModel model_;
};

}  // namespace

bool MlpModel::operator==(const MlpModel& other) const {
    return w_hidden.rows() == other.w_hidden.rows() && w_hidden.cols() == other.w_hidden.cols() &&
           w_out.rows() == other.w_out.rows() && w_out.cols() == other.w_out.cols() &&
           w_hidden == other.w_hidden && w_out == other.w_out && scaling == other.scaling &&
           scale_low == other.scale_low && scale_high == other.scale_high && classes == other.classes;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void validate(const MlpConfig& config) {
    if (!(config.learning_rate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning_rate must be > 0");
    if (!(config.momentum >= 0.0 && config.momentum < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "momentum must lie in [0, 1)");
    }
    if (!(config.scale_low < config.scale_high)) {
        throw Error(ErrorCode::InvalidArgument, "scale interval must have low < high");
    }
}

Eigen::VectorXd scale_input(const MlpModel& model, std::span<const double> x) {
    check_dimension(model, x.size());
    Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()));
    const double width = model.scale_high - model.scale_low;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto& r = model.scaling[j];
        const auto i = static_cast<Eigen::Index>(j);
        if (r.max > r.min) {
            out(i) = model.scale_low + (x[j] - r.min) / (r.max - r.min) * width;
        } else {
            out(i) = model.scale_low + 0.5 * width;
        }
    }
    return out;
}

MlpModel mlp_initialize(const TrainingSet& data, const MlpConfig& config) {
    validate(config);
    if (data.classes.size() < 2) throw Error(ErrorCode::EmptyClass, "at least two classes are required");
    validate(data);
    const auto counts = class_counts(data);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) throw Error(ErrorCode::EmptyClass, "class '" + data.classes[c] + "' has no samples");
    }

    const std::size_t n = data.dimension();
    const std::size_t n_classes = data.classes.size();
    const std::size_t hidden = config.hidden_units > 0 ? config.hidden_units : (n + n_classes + 1) / 2;

    MlpModel model;
    model.classes = data.classes;
    model.scale_low = config.scale_low;
    model.scale_high = config.scale_high;
    model.scaling.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto [lo, hi] = std::minmax_element(data.rows.begin(), data.rows.end(),
                                            [j](const auto& a, const auto& b) { return a[j] < b[j]; });
        model.scaling[j] = {(*lo)[j], (*hi)[j]};
    }

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> uniform(-0.5, 0.5);
    model.w_hidden.resize(static_cast<Eigen::Index>(hidden), static_cast<Eigen::Index>(n + 1));
    model.w_out.resize(static_cast<Eigen::Index>(n_classes), static_cast<Eigen::Index>(hidden + 1));
    for (Eigen::Index r = 0; r < model.w_hidden.rows(); ++r) {
        for (Eigen::Index c = 0; c < model.w_hidden.cols(); ++c) model.w_hidden(r, c) = uniform(rng);
    }
    for (Eigen::Index r = 0; r < model.w_out.rows(); ++r) {
        for (Eigen::Index c = 0; c < model.w_out.cols(); ++c) model.w_out(r, c) = uniform(rng);
    }
    return model;
}

MlpModel mlp_train(const TrainingSet& data, const MlpConfig& config) {
    MlpModel model = mlp_initialize(data, config);

    std::vector<Eigen::VectorXd> inputs;
    std::vector<Eigen::VectorXd> targets;
    inputs.reserve(data.size());
    targets.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        inputs.push_back(scale_input(model, data.rows[i]));
        Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(data.classes.size()));
        t(static_cast<Eigen::Index>(data.labels[i])) = 1.0;
        targets.push_back(std::move(t));
    }

    // Shuffling draws from a stream separate from weight initialisation.
    std::mt19937_64 rng(config.seed ^ 0x9E3779B97F4A7C15ULL);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    Eigen::MatrixXd v_hidden = Eigen::MatrixXd::Zero(model.w_hidden.rows(), model.w_hidden.cols());
    Eigen::MatrixXd v_out = Eigen::MatrixXd::Zero(model.w_out.rows(), model.w_out.cols());
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double loss = 0.0;
        for (const auto i : order) {
            const Forward f = forward(model, inputs[i]);
            loss += 0.5 * (f.output - targets[i]).squaredNorm();
            const MlpGradient g = backward(model, f, targets[i]);
            v_hidden = config.momentum * v_hidden - config.learning_rate * g.d_hidden;
            v_out = config.momentum * v_out - config.learning_rate * g.d_out;
            model.w_hidden += v_hidden;
            model.w_out += v_out;
        }
        if (!std::isfinite(loss) || !model.w_hidden.allFinite() || !model.w_out.allFinite()) {
            throw Error(ErrorCode::NonFiniteLoss,
                        "training diverged in epoch " + std::to_string(epoch + 1) + "; lower the learning rate");
        }
    }
    return model;
}

MlpPrediction mlp_predict(const MlpModel& model, std::span<const double> x) {
    const Forward f = forward(model, scale_input(model, x));
    MlpPrediction p;
    p.activations.assign(f.output.data(), f.output.data() + f.output.size());
    p.label = argmax(p.activations);
    return p;
}

MlpGradient mlp_gradient(const MlpModel& model, std::span<const double> x, std::span<const double> target) {
    const Forward f = forward(model, scale_input(model, x));
    return backward(model, f, as_target(model, target));
}

double mlp_loss(const MlpModel& model, std::span<const double> x, std::span<const double> target) {
    const Forward f = forward(model, scale_input(model, x));
    return 0.5 * (f.output - as_target(model, target)).squaredNorm();
}

std::unique_ptr<Classifier> MlpLearner::fit(const TrainingSet& data) const {
    return std::make_unique<MlpClassifier>(mlp_train(data, config_));
}

}  // namespace spamlab
