#include "spamlab/training_set.hpp"

#include "spamlab/error.hpp"
#include "spamlab/features.hpp"

namespace spamlab {

TrainingSet TrainingSet::select_rows(std::span<const std::size_t> positions) const {
    TrainingSet out;
    out.classes = classes;
    out.rows.reserve(positions.size());
    out.labels.reserve(positions.size());
    for (const auto p : positions) {
        out.rows.push_back(rows.at(p));
        out.labels.push_back(labels.at(p));
    }
    return out;
}

TrainingSet TrainingSet::select_features(std::span<const std::size_t> subset) const {
    validate_subset(subset, dimension());
    TrainingSet out;
    out.classes = classes;
    out.labels = labels;
    out.rows.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<double> projected;
        projected.reserve(subset.size());
        for (const auto index : subset) projected.push_back(row[index - 1]);
        out.rows.push_back(std::move(projected));
    }
    return out;
}

void validate(const TrainingSet& data) {
    if (data.labels.size() != data.rows.size()) {
        throw Error(ErrorCode::LengthMismatch, std::to_string(data.rows.size()) + " rows but " +
                                                   std::to_string(data.labels.size()) + " labels");
    }
    const std::size_t dim = data.dimension();
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        if (data.rows[i].size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " has " +
                                                          std::to_string(data.rows[i].size()) +
                                                          " values, expected " + std::to_string(dim));
        }
        if (data.labels[i] >= data.classes.size()) {
            throw Error(ErrorCode::InvalidArgument, "label index out of range at row " + std::to_string(i));
        }
    }
}

std::vector<std::size_t> class_counts(const TrainingSet& data) {
    std::vector<std::size_t> counts(data.classes.size(), 0);
    for (const auto label : data.labels) ++counts.at(label);
    return counts;
}

std::size_t argmax(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

}  // namespace spamlab
