#pragma once

#include "spamlab/email_parser.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spamlab {

inline constexpr std::size_t kFeatureCount = 21;

enum class Label { ham, spam };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

/// Feature values in table order. `values[i]` holds feature i+1 for a full
/// vector; projected vectors hold the selected features in subset order.
struct FeatureVector {
    std::vector<double> values;
    std::optional<Label> label;
    std::string source_id;

    bool operator==(const FeatureVector&) const = default;
};

/// Subject = features 1-6, Headers = 7-8, Body = 9-21.
enum class FeatureCategory { Subject, Headers, Body };

std::vector<std::size_t> category_indices(FeatureCategory category);

/// Computes all 21 behavioural features. The label is left unset.
FeatureVector extract(const ParsedEmail& email);

/// Restricts `v` to the 1-based positions in `subset`, in subset order.
/// Throws Error(InvalidSubset) on empty, out-of-range or duplicate indices.
FeatureVector project(const FeatureVector& v, std::span<const std::size_t> subset);

/// Checks 1-based indices against a dimensionality of `n`.
void validate_subset(std::span<const std::size_t> subset, std::size_t n);

/// Parses "cat1,cat2,8,12-14,all" into sorted distinct 1-based indices.
std::vector<std::size_t> parse_feature_spec(std::string_view spec);

/// "f8" for index 8.
std::string feature_name(std::size_t index);

/// Inverse of feature_name; nullopt for anything else.
std::optional<std::size_t> parse_feature_name(std::string_view name);

}  // namespace spamlab
