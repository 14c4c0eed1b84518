#pragma once

#include "spamlab/training_set.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace spamlab {

/// Counts indexed by (predicted class, true class).
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> classes);

    const std::vector<std::string>& classes() const { return classes_; }
    std::size_t class_count() const { return classes_.size(); }

    std::size_t at(std::size_t predicted, std::size_t truth) const { return counts_[predicted * classes_.size() + truth]; }
    void add(std::size_t predicted, std::size_t truth, std::size_t n = 1);
    void merge(const ConfusionMatrix& other);

    std::size_t total() const;
    std::size_t correct() const;

    // One-vs-rest cells for class i.
    std::size_t tp(std::size_t i) const;
    std::size_t fp(std::size_t i) const;
    std::size_t fn(std::size_t i) const;
    std::size_t tn(std::size_t i) const;
    std::size_t support(std::size_t i) const;

    ConfusionMatrix transposed() const;

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::vector<std::string> classes_;
    std::vector<std::size_t> counts_;
};

ConfusionMatrix confusion(std::span<const std::size_t> predicted, std::span<const std::size_t> truth,
                          std::vector<std::string> classes);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;

    bool operator==(const ClassMetrics&) const = default;
};

struct EvalReport {
    ConfusionMatrix matrix;
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    /// Set when some precision or recall had a zero denominator and was reported as 0.
    bool undefined_metric = false;
    std::vector<EvalReport> folds;

    bool operator==(const EvalReport&) const = default;
};

EvalReport metrics(const ConfusionMatrix& matrix);

/// Stratified partition of row positions into k folds. Within each class the
/// rows are shuffled with `seed` and dealt round-robin, continuing the fold
/// cursor across classes so fold sizes stay balanced.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const std::size_t> labels, std::size_t n_classes,
                                                       std::size_t k, std::uint64_t seed);

struct CvOptions {
    std::size_t k = 10;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
};

/// Trains on k-1 folds, predicts the held-out fold, pools every prediction
/// into one confusion matrix and keeps the per-fold reports.
EvalReport cross_validate(const Learner& learner, const TrainingSet& data, const CvOptions& options = {});

}  // namespace spamlab
