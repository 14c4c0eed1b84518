#include "spamlab/report.hpp"

#include "spamlab/features.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace spamlab {

namespace {

std::string percent(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", value * 100.0);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

constexpr std::size_t kMetricWidth = 11;
constexpr std::string_view kNbTitle = "Naive Bayes";
constexpr std::string_view kMlpTitle = "ANN (Multilayer Perceptron)";

std::string metric_cells(const std::optional<EvalReport>& r) {
    if (!r) return right("-", kMetricWidth) + right("-", kMetricWidth) + right("-", kMetricWidth);
    return right(percent(r->accuracy), kMetricWidth) + right(percent(r->weighted_precision), kMetricWidth) +
           right(percent(r->weighted_recall), kMetricWidth);
}

std::string metric_header() {
    return right("Accuracy", kMetricWidth) + right("Precision", kMetricWidth) + right("Recall", kMetricWidth);
}

std::string join_indices(std::span<const std::size_t> indices) {
    std::string out;
    for (const auto i : indices) out += (out.empty() ? "" : ",") + std::to_string(i);
    return out;
}

}  // namespace

std::string describe_features(std::span<const std::size_t> indices) {
    std::vector<std::size_t> sorted(indices.begin(), indices.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> assembled;
    std::vector<std::string> names;
    const FeatureCategory cats[] = {FeatureCategory::Subject, FeatureCategory::Headers, FeatureCategory::Body};
    for (std::size_t c = 0; c < 3; ++c) {
        const auto members = category_indices(cats[c]);
        const bool all = std::all_of(members.begin(), members.end(), [&](std::size_t i) {
            return std::binary_search(sorted.begin(), sorted.end(), i);
        });
        if (all) {
            assembled.insert(assembled.end(), members.begin(), members.end());
            names.push_back("Category " + std::to_string(c + 1));
        }
    }
    if (assembled == sorted && !names.empty()) {
        std::string out;
        for (const auto& n : names) out += (out.empty() ? "" : " + ") + n;
        return out;
    }
    return "Features " + join_indices(indices);
}

std::string best_first_label(std::span<const std::size_t> indices) {
    std::string out = "Best first: ";
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i > 0) {
            if (indices.size() == 2) {
                out += " and ";
            } else {
                out += i + 1 == indices.size() ? ", and " : ", ";
            }
        }
        out += std::to_string(indices[i]);
    }
    return out;
}

std::string format_comparison_table(std::span<const ComparisonRow> rows) {
    const bool with_nb = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.naive_bayes.has_value(); });
    const bool with_mlp = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.mlp.has_value(); });
    std::size_t label_width = std::string_view("Features").size();
    for (const auto& r : rows) label_width = std::max(label_width, r.features.size());
    label_width += 2;
    const std::size_t group_width = 3 * kMetricWidth;

    std::string titles = pad("", label_width);
    if (with_nb) titles += " |" + pad(" " + std::string(kNbTitle), group_width);
    if (with_mlp) titles += " |" + pad(" " + std::string(kMlpTitle), group_width);
    titles.erase(titles.find_last_not_of(' ') + 1);

    std::ostringstream out;
    out << titles << '\n' << pad("Features", label_width);
    if (with_nb) out << " |" << metric_header();
    if (with_mlp) out << " |" << metric_header();
    out << '\n' << std::string(label_width, '-');
    if (with_nb) out << "-+" << std::string(group_width, '-');
    if (with_mlp) out << "-+" << std::string(group_width, '-');
    out << '\n';
    for (const auto& r : rows) {
        out << pad(r.features, label_width);
        if (with_nb) out << " |" << metric_cells(r.naive_bayes);
        if (with_mlp) out << " |" << metric_cells(r.mlp);
        out << '\n';
    }
    return out.str();
}

std::string report_selection(const FeatureSubset& result, std::span<const SelectionComparison> comparisons) {
    std::ostringstream out;
    if (result.baseline_only) {
        out << "selected: none (no subset beat the majority-class baseline)\n";
    } else {
        out << "selected: " << join_indices(result.indices) << '\n';
    }
    char merit[64];
    std::snprintf(merit, sizeof merit, "%.6f", result.merit);
    out << "merit: " << merit << '\n';
    std::snprintf(merit, sizeof merit, "%.6f", result.baseline_merit);
    out << "baseline merit: " << merit << '\n';
    out << "evaluations: " << result.evaluations_used << '\n';
    if (result.budget_exhausted) out << "note: evaluation budget exhausted; result is the best found so far\n";

    const bool any_report = std::any_of(comparisons.begin(), comparisons.end(),
                                        [](const auto& c) { return c.full || c.subset; });
    if (!any_report) return out.str();

    const auto find = [&](std::string_view name) -> const SelectionComparison* {
        for (const auto& c : comparisons) {
            if (c.learner == name) return &c;
        }
        return nullptr;
    };
    const auto* nb = find("naive_bayes");
    const auto* mlp = find("mlp");
    const bool has_full = std::any_of(comparisons.begin(), comparisons.end(), [](const auto& c) { return c.full.has_value(); });

    std::vector<ComparisonRow> rows;
    if (has_full) {
        rows.push_back({"All features", nb ? nb->full : std::nullopt, mlp ? mlp->full : std::nullopt});
    }
    rows.push_back({best_first_label(result.indices), nb ? nb->subset : std::nullopt, mlp ? mlp->subset : std::nullopt});
    out << '\n' << format_comparison_table(rows);
    return out.str();
}

nlohmann::json to_json(const EvalReport& report) {
    nlohmann::json j;
    const auto& m = report.matrix;
    j["classes"] = m.classes();
    nlohmann::json counts = nlohmann::json::array();
    for (std::size_t p = 0; p < m.class_count(); ++p) {
        std::vector<std::size_t> row;
        for (std::size_t t = 0; t < m.class_count(); ++t) row.push_back(m.at(p, t));
        counts.push_back(row);
    }
    j["confusion"] = {{"rows", "predicted"}, {"columns", "true"}, {"counts", counts}};
    j["accuracy"] = report.accuracy;
    j["weighted_precision"] = report.weighted_precision;
    j["weighted_recall"] = report.weighted_recall;
    j["undefined_metric"] = report.undefined_metric;
    nlohmann::json per_class = nlohmann::json::object();
    for (std::size_t i = 0; i < report.per_class.size(); ++i) {
        per_class[m.classes()[i]] = {{"precision", report.per_class[i].precision},
                                     {"recall", report.per_class[i].recall}};
    }
    j["per_class"] = per_class;
    if (!report.folds.empty()) {
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& f : report.folds) folds.push_back(to_json(f));
        j["folds"] = folds;
    }
    return j;
}

nlohmann::json to_json(const FeatureSubset& result) {
    nlohmann::json log = nlohmann::json::array();
    for (const auto& e : result.log) log.push_back({{"indices", e.indices}, {"merit", e.merit}});
    return {{"indices", result.indices},
            {"merit", result.merit},
            {"baseline_merit", result.baseline_merit},
            {"baseline_only", result.baseline_only},
            {"evaluations_used", result.evaluations_used},
            {"budget_exhausted", result.budget_exhausted},
            {"log", log}};
}

}  // namespace spamlab
