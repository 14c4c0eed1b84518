#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace spamlab {

/// Numeric samples with class indices into `classes`. Learners, evaluation and
/// feature selection all operate on this representation.
struct TrainingSet {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> labels;
    std::vector<std::string> classes;

    std::size_t size() const { return rows.size(); }
    std::size_t dimension() const { return rows.empty() ? 0 : rows.front().size(); }

    /// Samples at the given row positions, in that order.
    TrainingSet select_rows(std::span<const std::size_t> positions) const;

    /// Columns at the given 1-based feature positions, in that order.
    TrainingSet select_features(std::span<const std::size_t> subset) const;
};

/// Throws on ragged rows, label/row count mismatch or out-of-range labels.
void validate(const TrainingSet& data);

std::vector<std::size_t> class_counts(const TrainingSet& data);

/// A fitted model that maps a feature row to a class index.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual std::size_t predict(std::span<const double> x) const = 0;
};

class Learner {
public:
    virtual ~Learner() = default;
    virtual std::unique_ptr<Classifier> fit(const TrainingSet& data) const = 0;
    virtual std::string name() const = 0;
};

/// First index of the maximum; ties go to the lower index.
std::size_t argmax(std::span<const double> scores);

}  // namespace spamlab
