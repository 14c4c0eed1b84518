#include "spamlab/model_io.hpp"

#include "spamlab/error.hpp"
#include "spamlab/features.hpp"

#include <json.hpp>
#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <type_traits>

namespace spamlab {

namespace {

using nlohmann::json;

constexpr std::string_view kMagic = "spamlab-model ";
constexpr std::string_view kChecksumTag = "crc32 ";

std::uint32_t checksum(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size()));
    return static_cast<std::uint32_t>(crc);
}

std::string checksum_hex(std::string_view bytes) {
    char hex[16];
    std::snprintf(hex, sizeof hex, "%08x", checksum(bytes));
    return hex;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols)) {
        throw Error(ErrorCode::CorruptModel, "matrix payload has the wrong size");
    }
    Eigen::MatrixXd m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data[k++].get<double>();
    }
    return m;
}

json nb_to_json(const NbModel& m) {
    json params = json::array();
    for (const auto& per_class : m.params) {
        json row = json::array();
        for (const auto& g : per_class) row.push_back({{"mean", g.mean}, {"variance", g.variance}});
        params.push_back(std::move(row));
    }
    return {{"priors", m.priors}, {"feature_count", m.feature_count}, {"gaussians", std::move(params)}};
}

NbModel nb_from_json(const json& j, std::vector<std::string> classes) {
    NbModel m;
    m.classes = std::move(classes);
    m.priors = j.at("priors").get<std::vector<double>>();
    m.feature_count = j.at("feature_count").get<std::size_t>();
    for (const auto& row : j.at("gaussians")) {
        std::vector<Gaussian> per_class;
        for (const auto& g : row) per_class.push_back({g.at("mean").get<double>(), g.at("variance").get<double>()});
        if (per_class.size() != m.feature_count) throw Error(ErrorCode::CorruptModel, "gaussian table has wrong width");
        m.params.push_back(std::move(per_class));
    }
    if (m.params.size() != m.classes.size() || m.priors.size() != m.classes.size()) {
        throw Error(ErrorCode::CorruptModel, "naive Bayes tables do not match class count");
    }
    return m;
}

json mlp_to_json(const MlpModel& m) {
    json scaling = json::array();
    for (const auto& r : m.scaling) scaling.push_back({r.min, r.max});
    return {{"scale_low", m.scale_low},
            {"scale_high", m.scale_high},
            {"scaling", std::move(scaling)},
            {"w_hidden", matrix_to_json(m.w_hidden)},
            {"w_out", matrix_to_json(m.w_out)}};
}

MlpModel mlp_from_json(const json& j, std::vector<std::string> classes) {
    MlpModel m;
    m.classes = std::move(classes);
    m.scale_low = j.at("scale_low").get<double>();
    m.scale_high = j.at("scale_high").get<double>();
    for (const auto& r : j.at("scaling")) m.scaling.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    m.w_hidden = matrix_from_json(j.at("w_hidden"));
    m.w_out = matrix_from_json(j.at("w_out"));
    const auto n = static_cast<Eigen::Index>(m.scaling.size());
    if (m.w_hidden.cols() != n + 1 || m.w_out.cols() != m.w_hidden.rows() + 1 ||
        m.w_out.rows() != static_cast<Eigen::Index>(m.classes.size())) {
        throw Error(ErrorCode::CorruptModel, "network weight shapes are inconsistent");
    }
    return m;
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kind == ModelKind::naive_bayes ? "naive_bayes" : "mlp"; }

const std::vector<std::string>& ModelFile::classes() const {
    return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.classes; }, model);
}

std::string serialize_model(const ModelFile& file) {
    json doc;
    doc["kind"] = to_string(file.kind());
    std::vector<std::string> names;
    for (const auto i : file.feature_indices) names.push_back(feature_name(i));
    doc["feature_names"] = names;
    doc["classes"] = file.classes();
    doc["payload"] = file.kind() == ModelKind::naive_bayes ? nb_to_json(std::get<NbModel>(file.model))
                                                           : mlp_to_json(std::get<MlpModel>(file.model));

    std::string text(kMagic);
    text += std::to_string(file.format_version);
    text += '\n';
    text += doc.dump(1);
    text += '\n';
    const std::string hex = checksum_hex(text);
    text += kChecksumTag;
    text += hex;
    text += '\n';
    return text;
}

ModelFile parse_model(std::string_view text) {
    const auto first_eol = text.find('\n');
    if (first_eol == std::string_view::npos || !text.starts_with(kMagic)) {
        throw Error(ErrorCode::CorruptModel, "missing model header");
    }
    const std::string_view version_text = text.substr(kMagic.size(), first_eol - kMagic.size());
    int version = 0;
    const auto [vptr, vec] = std::from_chars(version_text.data(), version_text.data() + version_text.size(), version);
    if (vec != std::errc{} || vptr != version_text.data() + version_text.size() || version < 1) {
        throw Error(ErrorCode::CorruptModel, "bad model format version");
    }
    if (version > kModelFormatVersion) {
        throw Error(ErrorCode::UnsupportedVersion, "model format version " + std::to_string(version) +
                                                       " is newer than supported version " +
                                                       std::to_string(kModelFormatVersion));
    }

    std::string_view body = text;
    if (!body.ends_with('\n')) throw Error(ErrorCode::CorruptModel, "model file is truncated");
    body.remove_suffix(1);
    const auto last_eol = body.rfind('\n');
    if (last_eol == std::string_view::npos || last_eol < first_eol) {
        throw Error(ErrorCode::CorruptModel, "model file is truncated");
    }
    const std::string_view checksum_line = body.substr(last_eol + 1);
    const std::string_view covered = text.substr(0, last_eol + 1);
    if (!checksum_line.starts_with(kChecksumTag) || checksum_line.size() != kChecksumTag.size() + 8) {
        throw Error(ErrorCode::CorruptModel, "model checksum line missing");
    }
    if (checksum_line.substr(kChecksumTag.size()) != checksum_hex(covered)) {
        throw Error(ErrorCode::CorruptModel, "model checksum mismatch");
    }

    try {
        const json doc = json::parse(covered.substr(first_eol + 1));
        ModelFile file;
        file.format_version = version;
        for (const auto& name : doc.at("feature_names")) {
            const auto index = parse_feature_name(name.get<std::string>());
            if (!index) throw Error(ErrorCode::CorruptModel, "bad feature name in model");
            file.feature_indices.push_back(*index);
        }
        auto classes = doc.at("classes").get<std::vector<std::string>>();
        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "naive_bayes") {
            file.model = nb_from_json(doc.at("payload"), std::move(classes));
        } else if (kind == "mlp") {
            file.model = mlp_from_json(doc.at("payload"), std::move(classes));
        } else {
            throw Error(ErrorCode::CorruptModel, "unknown model kind '" + kind + "'");
        }
        const std::size_t width = std::visit(
            [](const auto& m) -> std::size_t {
                if constexpr (std::is_same_v<std::decay_t<decltype(m)>, NbModel>) {
                    return m.feature_count;
                } else {
                    return m.feature_count();
                }
            },
            file.model);
        if (width != file.feature_indices.size()) {
            throw Error(ErrorCode::CorruptModel, "feature list does not match the model width");
        }
        return file;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::CorruptModel, std::string("bad model payload: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << serialize_model(file);
    if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_model(text);
}

std::size_t predict(const ModelFile& file, std::span<const double> x) {
    if (file.kind() == ModelKind::naive_bayes) return nb_predict(std::get<NbModel>(file.model), x);
    return mlp_predict(std::get<MlpModel>(file.model), x).label;
}

std::vector<double> class_scores(const ModelFile& file, std::span<const double> x) {
    if (file.kind() == ModelKind::naive_bayes) return nb_posterior(std::get<NbModel>(file.model), x);
    return mlp_predict(std::get<MlpModel>(file.model), x).activations;
}

}  // namespace spamlab
