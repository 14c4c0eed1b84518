#pragma once

#include "spamlab/mlp.hpp"
#include "spamlab/naive_bayes.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace spamlab {

/// Highest model container version this build reads and the one it writes.
inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { naive_bayes, mlp };

std::string_view to_string(ModelKind kind);

/// A trained model plus the feature numbers it was trained on.
struct ModelFile {
    int format_version = kModelFormatVersion;
    std::vector<std::size_t> feature_indices;
    std::variant<NbModel, MlpModel> model;

    ModelKind kind() const { return model.index() == 0 ? ModelKind::naive_bayes : ModelKind::mlp; }
    const std::vector<std::string>& classes() const;
};

/// Layout:
///
///     spamlab-model <version>
///     <JSON document>
///     crc32 <8 hex digits over every preceding byte>
std::string serialize_model(const ModelFile& file);

/// Throws Error(UnsupportedVersion) for a newer container and
/// Error(CorruptModel) for truncation, checksum mismatch or bad payload.
ModelFile parse_model(std::string_view text);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

/// Class index predicted for a full-or-projected row matching feature_indices.
std::size_t predict(const ModelFile& file, std::span<const double> x);

/// Posterior (NB) or output activations (MLP) per class.
std::vector<double> class_scores(const ModelFile& file, std::span<const double> x);

}  // namespace spamlab
