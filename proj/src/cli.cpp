#include "spamlab/cli.hpp"

#include "spamlab/corpus.hpp"
#include "spamlab/error.hpp"
#include "spamlab/evaluation.hpp"
#include "spamlab/feature_selection.hpp"
#include "spamlab/features.hpp"
#include "spamlab/model_io.hpp"
#include "spamlab/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iterator>
#include <memory>
#include <ostream>
#include <sstream>

namespace spamlab::cli {

namespace {

constexpr std::string_view kVersion = "1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataSource {
    std::string data_csv;
    std::string corpus;
    std::string layout = "auto";
};

struct Common {
    DataSource source;
    std::string features;
    std::string classifier = "nb";
    std::size_t k = 10;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    bool json = false;
    NbConfig nb;
    MlpConfig mlp;
};

void add_source_options(CLI::App* cmd, DataSource& source) {
    cmd->add_option("--data", source.data_csv, "Dataset CSV produced by `extract`");
    cmd->add_option("--corpus", source.corpus, "Corpus path (extracted on the fly)");
    cmd->add_option("--layout", source.layout, "Corpus layout: auto, two-dirs, mbox-pair, manifest, unlabeled")
        ->check(CLI::IsMember({"auto", "two-dirs", "mbox-pair", "manifest", "unlabeled"}));
}

void add_learner_options(CLI::App* cmd, Common& c) {
    cmd->add_option("--classifier", c.classifier, "nb or mlp")->check(CLI::IsMember({"nb", "mlp"}));
    cmd->add_option("--seed", c.seed, "Seed for folds and network initialisation");
    cmd->add_option("--variance-floor", c.nb.variance_floor, "Naive Bayes variance floor");
    cmd->add_option("--prior-smoothing", c.nb.prior_smoothing, "Naive Bayes prior smoothing");
    cmd->add_option("--hidden", c.mlp.hidden_units, "MLP hidden units (0 = (features + classes) / 2)");
    cmd->add_option("--learning-rate", c.mlp.learning_rate, "MLP learning rate");
    cmd->add_option("--momentum", c.mlp.momentum, "MLP momentum");
    cmd->add_option("--epochs", c.mlp.epochs, "MLP training epochs");
}

std::vector<std::size_t> feature_spec(const std::string& spec) {
    try {
        return parse_feature_spec(spec.empty() ? "all" : spec);
    } catch (const Error& e) {
        throw UsageError(std::string("--features: ") + e.what());
    }
}

// Without --features, use every column the data provides.
std::vector<std::size_t> feature_spec(const std::string& spec, const Dataset& dataset) {
    if (spec.empty()) return dataset.feature_indices;
    return feature_spec(spec);
}

Dataset load_source(const DataSource& source, std::size_t jobs, std::ostream& err) {
    if (source.data_csv.empty() == source.corpus.empty()) {
        throw UsageError("exactly one of --data or --corpus is required");
    }
    if (!source.data_csv.empty()) {
        if (!std::filesystem::exists(source.data_csv)) {
            throw Error(ErrorCode::Io, "dataset not found: " + source.data_csv);
        }
        return load_csv(source.data_csv);
    }
    const Corpus corpus = ingest(source.corpus, parse_layout(source.layout), jobs);
    for (const auto& f : corpus.failures) err << "warning: skipped " << f.source_id << ": " << f.reason << '\n';
    return build_dataset(corpus, jobs);
}

std::unique_ptr<Learner> make_learner(const std::string& name, const Common& c) {
    if (name == "mlp") {
        MlpConfig config = c.mlp;
        config.seed = c.seed;
        return std::make_unique<MlpLearner>(config);
    }
    return std::make_unique<NaiveBayesLearner>(c.nb);
}

std::string join(std::span<const std::size_t> v) {
    std::string out;
    for (const auto i : v) out += (out.empty() ? "" : ",") + std::to_string(i);
    return out;
}

// ---- commands ----------------------------------------------------------------

int cmd_synth(std::size_t n, double spam_rate, std::uint64_t seed, const std::string& dir, std::ostream& out) {
    const Corpus corpus = synth_corpus(n, spam_rate, seed);
    write_two_dirs(corpus, dir);
    std::size_t spam = 0;
    for (const auto& e : corpus.entries) spam += e.label == Label::spam ? 1 : 0;
    out << "wrote " << corpus.entries.size() << " messages (" << spam << " spam, " << corpus.entries.size() - spam
        << " ham) to " << dir << '\n';
    return kOk;
}

int cmd_extract(const Common& c, const std::string& out_path, std::ostream& out, std::ostream& err) {
    if (c.source.corpus.empty()) throw UsageError("extract requires --corpus");
    const auto indices = feature_spec(c.features);
    const Dataset dataset = project_dataset(load_source(c.source, c.jobs, err), indices);
    if (out_path.empty()) {
        write_csv(out, dataset);
    } else {
        save_csv(out_path, dataset);
        out << "wrote " << dataset.vectors.size() << " rows x " << dataset.feature_indices.size() << " features to "
            << out_path << '\n';
    }
    return kOk;
}

std::vector<std::vector<std::size_t>> sweep_feature_sets() {
    const auto c1 = category_indices(FeatureCategory::Subject);
    const auto c2 = category_indices(FeatureCategory::Headers);
    const auto c3 = category_indices(FeatureCategory::Body);
    const auto cat = [](std::initializer_list<const std::vector<std::size_t>*> parts) {
        std::vector<std::size_t> out;
        for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
        return out;
    };
    return {c1, c2, c3, cat({&c1, &c2}), cat({&c2, &c3}), cat({&c1, &c3}), cat({&c1, &c2, &c3})};
}

int cmd_evaluate(const Common& c, bool both, bool sweep, std::ostream& out, std::ostream& err) {
    const Dataset dataset = load_source(c.source, c.jobs, err);
    std::vector<std::vector<std::size_t>> feature_sets;
    if (sweep) {
        if (!c.features.empty()) throw UsageError("--sweep runs fixed category combinations; drop --features");
        feature_sets = sweep_feature_sets();
    } else {
        feature_sets.push_back(feature_spec(c.features, dataset));
    }

    const bool run_nb = both || c.classifier == "nb";
    const bool run_mlp = both || c.classifier == "mlp";
    CvOptions cv{c.k, c.seed, c.jobs};
    std::vector<ComparisonRow> rows;
    for (const auto& indices : feature_sets) {
        const TrainingSet data = to_training_set(project_dataset(dataset, indices));
        ComparisonRow row{describe_features(indices), std::nullopt, std::nullopt};
        if (run_nb) row.naive_bayes = cross_validate(*make_learner("nb", c), data, cv);
        if (run_mlp) row.mlp = cross_validate(*make_learner("mlp", c), data, cv);
        rows.push_back(std::move(row));
    }

    if (c.json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json row{{"features", r.features}};
            if (r.naive_bayes) row["naive_bayes"] = to_json(*r.naive_bayes);
            if (r.mlp) row["mlp"] = to_json(*r.mlp);
            j.push_back(row);
        }
        out << nlohmann::json{{"k", c.k}, {"seed", c.seed}, {"rows", j}}.dump(2) << '\n';
    } else {
        out << "stratified " << c.k << "-fold cross-validation, seed " << c.seed << ", " << dataset.vectors.size()
            << " samples\n"
            << format_comparison_table(rows);
    }
    return kOk;
}

int cmd_select(const Common& c, std::size_t stale_limit, std::size_t max_evaluations, const std::string& compare,
               std::ostream& out, std::ostream& err) {
    const Dataset source = load_source(c.source, c.jobs, err);
    const auto pool = feature_spec(c.features, source);
    const Dataset dataset = project_dataset(source, pool);
    const TrainingSet data = to_training_set(dataset);
    const auto learner = make_learner(c.classifier, c);

    SearchConfig config;
    config.stale_limit = stale_limit;
    config.max_evaluations = max_evaluations;
    config.jobs = c.jobs;
    config.evaluator = {learner.get(), c.k, c.seed};
    FeatureSubset result = best_first_forward(data, config);

    // Map positions within the pool back to feature numbers.
    const auto to_features = [&](std::vector<std::size_t>& positions) {
        for (auto& p : positions) p = pool[p - 1];
    };
    const auto positions = result.indices;
    to_features(result.indices);
    for (auto& entry : result.log) to_features(entry.indices);

    std::vector<SelectionComparison> comparisons;
    const CvOptions cv{c.k, c.seed, c.jobs};
    for (const std::string name : {"nb", "mlp"}) {
        if (compare != "both" && compare != name) continue;
        const auto l = make_learner(name, c);
        SelectionComparison comparison{l->name(), cross_validate(*l, data, cv), std::nullopt};
        if (!positions.empty()) comparison.subset = cross_validate(*l, data.select_features(positions), cv);
        comparisons.push_back(std::move(comparison));
    }

    if (c.json) {
        nlohmann::json j{{"learner", learner->name()}, {"pool", pool}, {"k", c.k}, {"seed", c.seed},
                         {"selection", to_json(result)}};
        for (const auto& cmp : comparisons) {
            nlohmann::json entry;
            if (cmp.full) entry["full"] = to_json(*cmp.full);
            if (cmp.subset) entry["subset"] = to_json(*cmp.subset);
            j["comparison"][cmp.learner] = entry;
        }
        out << j.dump(2) << '\n';
    } else {
        out << "best-first forward selection, wrapper " << learner->name() << ", " << c.k << "-fold CV, seed "
            << c.seed << '\n'
            << "candidate features: " << join(pool) << '\n'
            << report_selection(result, comparisons);
    }
    return kOk;
}

int cmd_train(const Common& c, const std::string& model_path, std::ostream& out, std::ostream& err) {
    if (model_path.empty()) throw UsageError("train requires --out");
    const Dataset source = load_source(c.source, c.jobs, err);
    const auto indices = feature_spec(c.features, source);
    const TrainingSet data = to_training_set(project_dataset(source, indices));
    ModelFile file;
    file.feature_indices = indices;
    if (c.classifier == "mlp") {
        MlpConfig config = c.mlp;
        config.seed = c.seed;
        file.model = mlp_train(data, config);
    } else {
        file.model = nb_fit(data, c.nb);
    }
    save_model(model_path, file);
    out << "trained " << to_string(file.kind()) << " on " << data.size() << " samples, features " << join(indices)
        << "; wrote " << model_path << '\n';
    return kOk;
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

int cmd_classify(const Common& c, const std::string& model_path, bool explain, std::ostream& out, std::ostream& err,
                 std::istream& in) {
    if (model_path.empty()) throw UsageError("classify requires --model");
    const ModelFile model = load_model(model_path);
    if (explain && model.kind() != ModelKind::naive_bayes) {
        throw UsageError("--explain is only available for naive_bayes models");
    }
    const auto& classes = model.classes();
    const auto spam_it = std::find(classes.begin(), classes.end(), "spam");
    if (spam_it == classes.end()) throw Error(ErrorCode::CorruptModel, "model has no 'spam' class");
    const auto spam_index = static_cast<std::size_t>(spam_it - classes.begin());

    Dataset dataset;
    if (c.source.data_csv.empty() && c.source.corpus.empty()) {
        const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        const Corpus corpus = make_corpus({{RawEmail{bytes, "stdin"}, std::nullopt}}, "stdin");
        if (!corpus.failures.empty()) throw Error(ErrorCode::MalformedMessage, corpus.failures.front().reason);
        dataset = build_dataset(corpus);
    } else {
        dataset = load_source(c.source, c.jobs, err);
    }
    const Dataset projected = project_dataset(dataset, model.feature_indices);

    for (const auto& v : projected.vectors) {
        auto scores = class_scores(model, v.values);
        const std::size_t label = predict(model, v.values);
        double total = 0.0;
        for (const auto s : scores) total += s;
        const double p_spam = total > 0.0 ? scores[spam_index] / total : 0.0;
        out << v.source_id << '\t' << classes[label] << '\t' << fixed6(p_spam) << '\n';
        if (explain) {
            const auto& nb = std::get<NbModel>(model.model);
            const auto terms = nb_log_likelihood_terms(nb, v.values);
            out << "#\tterm\tvalue";
            for (const auto& name : classes) out << "\tlog p(.|" << name << ')';
            out << '\n' << "#\tprior\t-";
            for (const auto p : nb.priors) out << '\t' << fixed6(std::log(p));
            out << '\n';
            for (std::size_t j = 0; j < v.values.size(); ++j) {
                out << "#\t" << feature_name(model.feature_indices[j]) << '\t' << v.values[j];
                for (std::size_t k = 0; k < classes.size(); ++k) out << '\t' << fixed6(terms[k][j]);
                out << '\n';
            }
        }
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    CLI::App app{"Spam classification from spammer behaviour features", "spamlab"};
    app.require_subcommand(1);
    std::ostringstream version;
    version << "spamlab " << kVersion << "\nmodel format: writes v" << kModelFormatVersion << ", reads v1-v"
            << kModelFormatVersion;
    app.set_version_flag("--version", version.str());

    Common c;
    const auto jobs_opt = [&](CLI::App* cmd) {
        cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
        return cmd;
    };

    std::size_t synth_n = 200;
    double synth_rate = 0.5;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic labelled corpus (spam/ and ham/)");
    synth->add_option("--n", synth_n, "Number of messages");
    synth->add_option("--spam-rate", synth_rate, "Fraction of spam");
    synth->add_option("--seed", c.seed, "Generator seed");
    synth->add_option("--out", synth_out, "Output directory")->required();

    std::string extract_out;
    auto* extract = jobs_opt(app.add_subcommand("extract", "Extract feature vectors from a corpus to CSV"));
    add_source_options(extract, c.source);
    extract->add_option("--features", c.features, "Feature spec, e.g. cat2,cat3 or 8,9,12-18");
    extract->add_option("--out", extract_out, "CSV output path (default: stdout)");

    bool both = false;
    bool sweep = false;
    auto* evaluate = jobs_opt(app.add_subcommand("evaluate", "Cross-validate classifiers on feature sets"));
    add_source_options(evaluate, c.source);
    add_learner_options(evaluate, c);
    evaluate->add_option("--features", c.features, "Feature spec (default: every column of the data)");
    evaluate->add_option("--k", c.k, "Number of folds");
    evaluate->add_flag("--both", both, "Run naive Bayes and MLP side by side");
    evaluate->add_flag("--sweep", sweep, "Run all seven category combinations");
    evaluate->add_flag("--json", c.json, "Emit JSON instead of a table");

    std::size_t stale_limit = 5;
    std::size_t max_evaluations = 0;
    std::string compare = "both";
    auto* select = jobs_opt(app.add_subcommand("select", "Best-first forward feature selection"));
    add_source_options(select, c.source);
    add_learner_options(select, c);
    select->add_option("--features", c.features, "Candidate feature pool (default: every column of the data)");
    select->add_option("--k", c.k, "Number of folds for the wrapper evaluator");
    select->add_option("--stale-limit", stale_limit, "Non-improving expansions before stopping")
        ->check(CLI::PositiveNumber);
    select->add_option("--max-evaluations", max_evaluations, "Evaluation budget (0 = 10 * n^2)");
    select->add_option("--compare", compare, "Learners for the full-vs-subset table: nb, mlp, both, none")
        ->check(CLI::IsMember({"nb", "mlp", "both", "none"}));
    select->add_flag("--json", c.json, "Emit JSON instead of a table");

    std::string model_out;
    auto* train = jobs_opt(app.add_subcommand("train", "Train a model and save it"));
    add_source_options(train, c.source);
    add_learner_options(train, c);
    train->add_option("--features", c.features, "Feature spec (default: every column of the data)");
    train->add_option("--out", model_out, "Model output path");

    std::string model_in;
    bool explain = false;
    auto* classify = jobs_opt(app.add_subcommand("classify", "Classify messages with a saved model"));
    add_source_options(classify, c.source);
    classify->add_option("--model", model_in, "Model file");
    classify->add_flag("--explain", explain, "Print naive Bayes log-likelihood terms per feature");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (c.k < 2) throw UsageError("--k must be at least 2");
        try {
            validate(c.mlp);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        if (*synth) return cmd_synth(synth_n, synth_rate, c.seed, synth_out, out);
        if (*extract) return cmd_extract(c, extract_out, out, err);
        if (*evaluate) return cmd_evaluate(c, both, sweep, out, err);
        if (*select) return cmd_select(c, stale_limit, max_evaluations, compare, out, err);
        if (*train) return cmd_train(c, model_out, out, err);
        if (*classify) return cmd_classify(c, model_in, explain, out, err, in);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

}  // namespace spamlab::cli
