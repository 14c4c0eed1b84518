#pragma once

#include "spamlab/email_parser.hpp"
#include "spamlab/features.hpp"
#include "spamlab/training_set.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spamlab {

enum class CorpusLayout {
    automatic,
    /// `spam/` and `ham/` subdirectories, one message per file.
    two_dirs,
    /// `spam.mbox` and `ham.mbox` in one directory.
    mbox_pair,
    /// Text file of `<spam|ham|unlabeled>\t<path>` lines, paths relative to the file.
    manifest_file,
    /// A single message file, an mbox file, or a directory of unlabeled messages.
    unlabeled,
};

CorpusLayout parse_layout(std::string_view name);

struct CorpusEntry {
    RawEmail raw;
    ParsedEmail parsed;
    std::optional<Label> label;
};

struct IngestFailure {
    std::string source_id;
    std::string reason;
};

struct Corpus {
    std::vector<CorpusEntry> entries;
    std::string manifest;
    std::vector<IngestFailure> failures;
};

/// Parses every message, moving unparseable ones to `failures`.
Corpus make_corpus(std::vector<std::pair<RawEmail, std::optional<Label>>> messages, std::string manifest,
                   std::size_t jobs = 1);

/// Reads a corpus from disk. Entries are ordered by source id. Throws
/// Error(NoMessagesFound) if the location holds no candidate messages.
Corpus ingest(const std::filesystem::path& path, CorpusLayout layout = CorpusLayout::automatic,
              std::size_t jobs = 1);

/// Labelled feature vectors over a set of 1-based feature indices.
struct Dataset {
    std::vector<std::size_t> feature_indices;
    std::vector<FeatureVector> vectors;

    std::vector<std::string> feature_names() const;
    bool operator==(const Dataset&) const = default;
};

/// Extracts all 21 features from every entry, preserving corpus order.
Dataset build_dataset(const Corpus& corpus, std::size_t jobs = 1);

/// Restricts a dataset to `indices` (feature numbers, not column positions).
/// Throws Error(FeatureMismatch) if the dataset lacks any of them.
Dataset project_dataset(const Dataset& dataset, std::span<const std::size_t> indices);

/// Class order is {ham, spam}. Throws Error(InvalidArgument) if any vector is unlabelled.
TrainingSet to_training_set(const Dataset& dataset);

/// Header `f<i>,...,label,source_id`; proportions carry at least 6 decimals
/// and every value round-trips exactly.
void write_csv(std::ostream& out, const Dataset& dataset);
Dataset read_csv(std::istream& in);
void save_csv(const std::filesystem::path& path, const Dataset& dataset);
Dataset load_csv(const std::filesystem::path& path);

/// Rates at which the synthetic generator plants each spammer pattern.
struct SynthConfig {
    double html_rate = 0.75;
    double white_text_rate = 0.3;
    bool white_text_in_ham = false;
    double gibberish_rate = 0.45;
    double hyperlink_rate = 0.8;
    double shouting_subject_rate = 0.4;
    double high_priority_rate = 0.3;
};

/// Deterministic synthetic corpus: round(n * spam_rate) spam messages that
/// plant behavioural patterns, the rest plain prose ham.
Corpus synth_corpus(std::size_t n, double spam_rate, std::uint64_t seed, const SynthConfig& config = {});

/// Writes entries as `<dir>/spam/<id>.eml` and `<dir>/ham/<id>.eml`.
void write_two_dirs(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace spamlab
