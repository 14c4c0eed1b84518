#pragma once

#include "spamlab/evaluation.hpp"
#include "spamlab/feature_selection.hpp"

#include <json.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spamlab {

/// One row of a classifier comparison table: a feature set and the
/// cross-validated report of each classifier (absent when not run).
struct ComparisonRow {
    std::string features;
    std::optional<EvalReport> naive_bayes;
    std::optional<EvalReport> mlp;
};

/// "Category 2 + Category 3" when `indices` is a union of whole categories,
/// otherwise the comma-separated list.
std::string describe_features(std::span<const std::size_t> indices);

/// "Best first: 8, 9, 10, and 18".
std::string best_first_label(std::span<const std::size_t> indices);

/// Fixed-width table with Accuracy, Precision and Recall (weighted, in
/// percent) per classifier column group.
std::string format_comparison_table(std::span<const ComparisonRow> rows);

/// Full-feature versus selected-subset reports for one learner.
struct SelectionComparison {
    std::string learner;
    std::optional<EvalReport> full;
    std::optional<EvalReport> subset;
};

std::string report_selection(const FeatureSubset& result, std::span<const SelectionComparison> comparisons);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const FeatureSubset& result);

}  // namespace spamlab
