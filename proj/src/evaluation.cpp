#include "spamlab/evaluation.hpp"

#include "spamlab/error.hpp"
#include "spamlab/parallel.hpp"

#include <algorithm>
#include <cassert>
#include <random>

namespace spamlab {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes)
    : classes_(std::move(classes)), counts_(classes_.size() * classes_.size(), 0) {}

void ConfusionMatrix::add(std::size_t predicted, std::size_t truth, std::size_t n) {
    if (predicted >= classes_.size() || truth >= classes_.size()) {
        throw Error(ErrorCode::InvalidArgument, "class index out of range in confusion matrix");
    }
    counts_[predicted * classes_.size() + truth] += n;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    if (other.classes_ != classes_) throw Error(ErrorCode::InvalidArgument, "cannot merge matrices over different classes");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

std::size_t ConfusionMatrix::total() const {
    std::size_t sum = 0;
    for (const auto c : counts_) sum += c;
    return sum;
}

std::size_t ConfusionMatrix::correct() const {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < classes_.size(); ++i) sum += at(i, i);
    return sum;
}

std::size_t ConfusionMatrix::tp(std::size_t i) const { return at(i, i); }

std::size_t ConfusionMatrix::fp(std::size_t i) const {
    std::size_t sum = 0;
    for (std::size_t t = 0; t < classes_.size(); ++t) {
        if (t != i) sum += at(i, t);
    }
    return sum;
}

std::size_t ConfusionMatrix::fn(std::size_t i) const {
    std::size_t sum = 0;
    for (std::size_t p = 0; p < classes_.size(); ++p) {
        if (p != i) sum += at(p, i);
    }
    return sum;
}

std::size_t ConfusionMatrix::tn(std::size_t i) const { return total() - tp(i) - fp(i) - fn(i); }

std::size_t ConfusionMatrix::support(std::size_t i) const { return tp(i) + fn(i); }

ConfusionMatrix ConfusionMatrix::transposed() const {
    ConfusionMatrix out(classes_);
    for (std::size_t p = 0; p < classes_.size(); ++p) {
        for (std::size_t t = 0; t < classes_.size(); ++t) out.add(t, p, at(p, t));
    }
    return out;
}

ConfusionMatrix confusion(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                          std::vector<std::string> classes) {
    if (predicted.size() != truth.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(predicted.size()) + " predictions for " +
                                                   std::to_string(truth.size()) + " labels");
    }
    if (predicted.empty()) throw Error(ErrorCode::LengthMismatch, "no samples to compare");
    ConfusionMatrix m(std::move(classes));
    for (std::size_t i = 0; i < predicted.size(); ++i) m.add(predicted[i], truth[i]);
    return m;
}

EvalReport metrics(const ConfusionMatrix& matrix) {
    const std::size_t total = matrix.total();
    if (total == 0) throw Error(ErrorCode::EmptyMatrix, "confusion matrix has no samples");

    EvalReport report;
    report.matrix = matrix;
    report.accuracy = static_cast<double>(matrix.correct()) / static_cast<double>(total);
    const auto ratio = [&report](std::size_t num, std::size_t den) {
        if (den == 0) {
            report.undefined_metric = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    for (std::size_t i = 0; i < matrix.class_count(); ++i) {
        ClassMetrics m;
        m.precision = ratio(matrix.tp(i), matrix.tp(i) + matrix.fp(i));
        m.recall = ratio(matrix.tp(i), matrix.tp(i) + matrix.fn(i));
        const double weight = static_cast<double>(matrix.support(i)) / static_cast<double>(total);
        report.weighted_precision += weight * m.precision;
        report.weighted_recall += weight * m.recall;
        report.per_class.push_back(m);
    }
    return report;
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const std::size_t> labels, std::size_t n_classes,
                                                       std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error(ErrorCode::TooFewSamples, "k must be at least 2");
    std::vector<std::vector<std::size_t>> by_class(n_classes);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] >= n_classes) throw Error(ErrorCode::InvalidArgument, "label index out of range");
        by_class[labels[i]].push_back(i);
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (by_class[c].size() < k) {
            throw Error(ErrorCode::TooFewSamples, "class " + std::to_string(c) + " has " +
                                                      std::to_string(by_class[c].size()) + " samples, fewer than k=" +
                                                      std::to_string(k));
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t cursor = 0;
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (const auto row : members) {
            folds[cursor].push_back(row);
            cursor = (cursor + 1) % k;
        }
    }
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

EvalReport cross_validate(const Learner& learner, const TrainingSet& data, const CvOptions& options) {
    validate(data);
    const auto counts = class_counts(data);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] < options.k) {
            throw Error(ErrorCode::TooFewSamples, "class '" + data.classes[c] + "' has " + std::to_string(counts[c]) +
                                                      " samples, fewer than k=" + std::to_string(options.k));
        }
    }
    const auto folds = stratified_folds(data.labels, data.classes.size(), options.k, options.seed);

    struct FoldResult {
        std::vector<std::size_t> predicted;
        std::vector<std::size_t> truth;
    };
    auto results = parallel_map(folds.size(), options.jobs, [&](std::size_t f) {
        std::vector<bool> held_out(data.size(), false);
        for (const auto row : folds[f]) held_out[row] = true;
        std::vector<std::size_t> train_rows;
        train_rows.reserve(data.size() - folds[f].size());
        for (std::size_t row = 0; row < data.size(); ++row) {
            if (!held_out[row]) train_rows.push_back(row);
        }
        assert(train_rows.size() + folds[f].size() == data.size());

        FoldResult result;
        try {
            const auto model = learner.fit(data.select_rows(train_rows));
            for (const auto row : folds[f]) {
                result.predicted.push_back(model->predict(data.rows[row]));
                result.truth.push_back(data.labels[row]);
            }
        } catch (const Error& e) {
            throw Error(e.code(), "fold " + std::to_string(f + 1) + ": " + e.message());
        }
        return result;
    });

    ConfusionMatrix pooled(data.classes);
    std::vector<EvalReport> fold_reports;
    for (const auto& r : results) {
        const auto m = confusion(r.predicted, r.truth, data.classes);
        pooled.merge(m);
        fold_reports.push_back(metrics(m));
    }
    EvalReport report = metrics(pooled);
    report.folds = std::move(fold_reports);
    return report;
}

}  // namespace spamlab
