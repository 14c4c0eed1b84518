#pragma once

#include "spamlab/corpus.hpp"
#include "spamlab/feature_selection.hpp"
#include "spamlab/mlp.hpp"
#include "spamlab/naive_bayes.hpp"
#include "spamlab/training_set.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace spamlab::test {

std::filesystem::path data_dir();

/// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

/// Two-class data where each feature is N(mean_c, 1) with class means
/// `separation` apart on every feature.
TrainingSet gaussian_blobs(std::size_t per_class, std::size_t dim, double separation, std::uint64_t seed);

/// Balanced two-class data: `informative` features equal the label plus
/// small noise, the rest pure noise. `dim` total features.
TrainingSet planted_features(std::size_t per_class, std::size_t dim, const std::vector<std::size_t>& informative,
                             double noise, std::uint64_t seed);

/// Maximum evaluate_subset merit over all 2^n - 1 non-empty subsets and the
/// majority baseline, found by enumerating bitmasks.
double exhaustive_best_merit(const TrainingSet& data, const WrapperEvaluator& evaluator);

/// Runs the CLI in-process.
struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};
CliResult run_cli(const std::vector<std::string>& args, const std::string& stdin_text = {});

/// One row of golden/expected.csv with its message bytes. Fractions such as
/// "2/3" are evaluated as a double division.
struct GoldenCase {
    std::string file;
    std::string bytes;
    std::vector<double> expected;
};
std::vector<GoldenCase> golden_cases();

/// Random NB model with 2-4 classes and 1-5 features, moderate parameters.
NbModel random_nb_model(std::mt19937_64& rng);

/// prior_c * prod_j N(x_j; mean, var), normalised. Straight-line evaluation
/// with no logarithms.
std::vector<double> product_form_posterior(const NbModel& model, const std::vector<double>& x);

/// Random network with the given shape, weights in [-2, 2], scaling ranges
/// drawn around zero.
MlpModel random_mlp_model(std::mt19937_64& rng, std::size_t inputs, std::size_t hidden, std::size_t outputs);

/// Central finite-difference gradient of mlp_loss with step h.
MlpGradient numeric_gradient(const MlpModel& model, const std::vector<double>& x, const std::vector<double>& target,
                             double h);

/// max |a - b| / max(1e-6, |a|, |b|) over all entries of both matrices.
double max_relative_error(const MlpGradient& a, const MlpGradient& b);

}  // namespace spamlab::test
