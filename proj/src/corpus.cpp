#include "spamlab/corpus.hpp"

#include "spamlab/error.hpp"
#include "spamlab/parallel.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

namespace spamlab {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<fs::path> message_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (!name.empty() && name.front() == '.') continue;
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

using Messages = std::vector<std::pair<RawEmail, std::optional<Label>>>;

void add_directory(Messages& out, const fs::path& dir, const std::string& prefix, std::optional<Label> label) {
    for (const auto& file : message_files(dir)) {
        out.push_back({RawEmail{read_file(file), prefix + file.filename().string()}, label});
    }
}

void add_mbox(Messages& out, const fs::path& file, std::optional<Label> label) {
    const std::string name = file.filename().string();
    const auto messages = split_mbox(read_file(file));
    for (std::size_t i = 0; i < messages.size(); ++i) {
        out.push_back({RawEmail{messages[i], name + "#" + std::to_string(i + 1)}, label});
    }
}

std::optional<Messages> read_manifest(const fs::path& file) {
    std::istringstream lines(read_file(file));
    Messages out;
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) return std::nullopt;
        const std::string label_text = line.substr(0, tab);
        std::optional<Label> label = parse_label(label_text);
        if (!label && label_text != "unlabeled") return std::nullopt;
        const std::string relative = line.substr(tab + 1);
        const fs::path target = file.parent_path() / relative;
        if (!fs::is_regular_file(target)) {
            throw Error(ErrorCode::Io, "manifest entry not found: " + target.string());
        }
        out.push_back({RawEmail{read_file(target), relative}, label});
    }
    return out;
}

bool looks_like_mbox(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::string first;
    std::getline(in, first);
    return first.starts_with("From ");
}

void add_unlabeled(Messages& out, const fs::path& path) {
    if (fs::is_directory(path)) {
        add_directory(out, path, "", std::nullopt);
    } else if (looks_like_mbox(path)) {
        add_mbox(out, path, std::nullopt);
    } else {
        out.push_back({RawEmail{read_file(path), path.filename().string()}, std::nullopt});
    }
}

// ---- CSV -------------------------------------------------------------------

bool is_proportion(std::size_t feature_index) { return feature_index >= 9 && feature_index <= 11; }

std::string format_value(double v, bool proportion) {
    char buf[512];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    std::string s(buf, r.ptr);
    if (proportion) {
        auto dot = s.find('.');
        if (dot == std::string::npos) {
            s.push_back('.');
            dot = s.size() - 1;
        }
        const std::size_t decimals = s.size() - dot - 1;
        if (decimals < 6) s.append(6 - decimals, '0');
    }
    return s;
}

std::string quote_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::vector<std::vector<std::string>> parse_csv_records(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool pending = false;  // a record has started on the current line
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            pending = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
            pending = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (pending || !field.empty()) {
                record.push_back(std::move(field));
                records.push_back(std::move(record));
            }
            field.clear();
            record.clear();
            pending = false;
        } else {
            field.push_back(c);
            pending = true;
        }
    }
    if (quoted) throw Error(ErrorCode::InvalidArgument, "unterminated quoted CSV field");
    if (pending || !field.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace

CorpusLayout parse_layout(std::string_view name) {
    if (name == "auto") return CorpusLayout::automatic;
    if (name == "two-dirs") return CorpusLayout::two_dirs;
    if (name == "mbox-pair") return CorpusLayout::mbox_pair;
    if (name == "manifest") return CorpusLayout::manifest_file;
    if (name == "unlabeled") return CorpusLayout::unlabeled;
    throw Error(ErrorCode::InvalidArgument, "unknown corpus layout '" + std::string(name) + "'");
}

Corpus make_corpus(Messages messages, std::string manifest, std::size_t jobs) {
    struct Outcome {
        std::optional<ParsedEmail> parsed;
        std::string error;
    };
    auto outcomes = parallel_map(messages.size(), jobs, [&](std::size_t i) {
        Outcome o;
        try {
            o.parsed = parse_email(messages[i].first);
        } catch (const Error& e) {
            o.error = e.what();
        }
        return o;
    });

    Corpus corpus;
    corpus.manifest = std::move(manifest);
    for (std::size_t i = 0; i < messages.size(); ++i) {
        auto& [raw, label] = messages[i];
        if (outcomes[i].parsed) {
            corpus.entries.push_back({std::move(raw), std::move(*outcomes[i].parsed), label});
        } else {
            corpus.failures.push_back({raw.source_id, outcomes[i].error});
        }
    }
    return corpus;
}

Corpus ingest(const fs::path& path, CorpusLayout layout, std::size_t jobs) {
    if (!fs::exists(path)) throw Error(ErrorCode::Io, "corpus path does not exist: " + path.string());

    if (layout == CorpusLayout::automatic) {
        if (fs::is_directory(path)) {
            if (fs::is_directory(path / "spam") && fs::is_directory(path / "ham")) {
                layout = CorpusLayout::two_dirs;
            } else if (fs::is_regular_file(path / "spam.mbox") && fs::is_regular_file(path / "ham.mbox")) {
                layout = CorpusLayout::mbox_pair;
            } else {
                layout = CorpusLayout::unlabeled;
            }
        } else {
            try {
                if (read_manifest(path)) layout = CorpusLayout::manifest_file;
            } catch (const Error&) {
                // A message file that happens to contain tabs; treat it as mail.
            }
            if (layout == CorpusLayout::automatic) layout = CorpusLayout::unlabeled;
        }
    }

    Messages messages;
    std::string description;
    switch (layout) {
        case CorpusLayout::two_dirs:
            if (!fs::is_directory(path / "spam") || !fs::is_directory(path / "ham")) {
                throw Error(ErrorCode::Io, path.string() + " lacks spam/ and ham/ subdirectories");
            }
            add_directory(messages, path / "ham", "ham/", Label::ham);
            add_directory(messages, path / "spam", "spam/", Label::spam);
            description = "two-dirs:" + path.string();
            break;
        case CorpusLayout::mbox_pair:
            add_mbox(messages, path / "ham.mbox", Label::ham);
            add_mbox(messages, path / "spam.mbox", Label::spam);
            description = "mbox-pair:" + path.string();
            break;
        case CorpusLayout::manifest_file: {
            auto parsed = read_manifest(path);
            if (!parsed) throw Error(ErrorCode::InvalidArgument, "not a corpus manifest: " + path.string());
            messages = std::move(*parsed);
            description = "manifest:" + path.string();
            break;
        }
        case CorpusLayout::unlabeled:
        case CorpusLayout::automatic:
            add_unlabeled(messages, path);
            description = "unlabeled:" + path.string();
            break;
    }
    if (messages.empty()) throw Error(ErrorCode::NoMessagesFound, "no messages found in " + path.string());
    std::stable_sort(messages.begin(), messages.end(),
                     [](const auto& a, const auto& b) { return a.first.source_id < b.first.source_id; });
    return make_corpus(std::move(messages), std::move(description), jobs);
}

std::vector<std::string> Dataset::feature_names() const {
    std::vector<std::string> names;
    for (const auto i : feature_indices) names.push_back(feature_name(i));
    return names;
}

Dataset build_dataset(const Corpus& corpus, std::size_t jobs) {
    Dataset dataset;
    for (std::size_t i = 1; i <= kFeatureCount; ++i) dataset.feature_indices.push_back(i);
    dataset.vectors = parallel_map(corpus.entries.size(), jobs, [&](std::size_t i) {
        const auto& entry = corpus.entries[i];
        FeatureVector v = extract(entry.parsed);
        v.label = entry.label;
        v.source_id = entry.raw.source_id;
        return v;
    });
    return dataset;
}

Dataset project_dataset(const Dataset& dataset, std::span<const std::size_t> indices) {
    validate_subset(indices, kFeatureCount);
    std::vector<std::size_t> positions;
    for (const auto index : indices) {
        const auto it = std::find(dataset.feature_indices.begin(), dataset.feature_indices.end(), index);
        if (it == dataset.feature_indices.end()) {
            std::string have;
            for (const auto& n : dataset.feature_names()) have += (have.empty() ? "" : ",") + n;
            std::string want;
            for (const auto i : indices) want += (want.empty() ? "" : ",") + feature_name(i);
            throw Error(ErrorCode::FeatureMismatch, "requested features {" + want + "} but data provides {" + have + "}");
        }
        positions.push_back(static_cast<std::size_t>(it - dataset.feature_indices.begin()) + 1);
    }
    Dataset out;
    out.feature_indices.assign(indices.begin(), indices.end());
    out.vectors.reserve(dataset.vectors.size());
    for (const auto& v : dataset.vectors) out.vectors.push_back(project(v, positions));
    return out;
}

TrainingSet to_training_set(const Dataset& dataset) {
    TrainingSet data;
    data.classes = {"ham", "spam"};
    data.rows.reserve(dataset.vectors.size());
    for (const auto& v : dataset.vectors) {
        if (!v.label) throw Error(ErrorCode::InvalidArgument, "labels required (unlabelled row '" + v.source_id + "')");
        data.rows.push_back(v.values);
        data.labels.push_back(*v.label == Label::spam ? 1 : 0);
    }
    return data;
}

void write_csv(std::ostream& out, const Dataset& dataset) {
    for (const auto& name : dataset.feature_names()) out << name << ',';
    out << "label,source_id\n";
    for (const auto& v : dataset.vectors) {
        if (v.values.size() != dataset.feature_indices.size()) {
            throw Error(ErrorCode::DimensionMismatch, "vector '" + v.source_id + "' does not match dataset columns");
        }
        for (std::size_t j = 0; j < v.values.size(); ++j) {
            out << format_value(v.values[j], is_proportion(dataset.feature_indices[j])) << ',';
        }
        out << (v.label ? to_string(*v.label) : std::string_view{}) << ',' << quote_field(v.source_id) << '\n';
    }
}

Dataset read_csv(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    const auto records = parse_csv_records(text);
    if (records.empty()) throw Error(ErrorCode::InvalidArgument, "dataset CSV has no header");
    const auto& header = records.front();
    if (header.size() < 3 || header[header.size() - 2] != "label" || header.back() != "source_id") {
        throw Error(ErrorCode::InvalidArgument, "dataset CSV header must end with label,source_id");
    }
    Dataset dataset;
    for (std::size_t j = 0; j + 2 < header.size(); ++j) {
        const auto index = parse_feature_name(header[j]);
        if (!index || *index > kFeatureCount) {
            throw Error(ErrorCode::InvalidArgument, "bad feature column '" + header[j] + "'");
        }
        dataset.feature_indices.push_back(*index);
    }
    validate_subset(dataset.feature_indices, kFeatureCount);

    const std::size_t width = header.size();
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::string where = "CSV record " + std::to_string(r + 1);
        if (rec.size() != width) {
            throw Error(ErrorCode::InvalidArgument,
                        where + " has " + std::to_string(rec.size()) + " fields, expected " + std::to_string(width));
        }
        FeatureVector v;
        for (std::size_t j = 0; j + 2 < width; ++j) {
            double value = 0.0;
            const auto& s = rec[j];
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
            if (ec != std::errc{} || ptr != s.data() + s.size()) {
                throw Error(ErrorCode::InvalidArgument, where + ": bad number '" + s + "'");
            }
            v.values.push_back(value);
        }
        const auto& label = rec[width - 2];
        if (!label.empty()) {
            v.label = parse_label(label);
            if (!v.label) throw Error(ErrorCode::InvalidArgument, where + ": unknown label '" + label + "'");
        }
        v.source_id = rec[width - 1];
        dataset.vectors.push_back(std::move(v));
    }
    return dataset;
}

void save_csv(const fs::path& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    write_csv(out, dataset);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

Dataset load_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    return read_csv(in);
}

void write_two_dirs(const Corpus& corpus, const fs::path& dir) {
    fs::create_directories(dir / "spam");
    fs::create_directories(dir / "ham");
    for (const auto& entry : corpus.entries) {
        if (!entry.label) throw Error(ErrorCode::InvalidArgument, "cannot write unlabelled entry " + entry.raw.source_id);
        const fs::path file = dir / std::string(to_string(*entry.label)) / (entry.raw.source_id + ".eml");
        std::ofstream out(file, std::ios::binary);
        out << entry.raw.bytes;
        if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
    }
}

}  // namespace spamlab
