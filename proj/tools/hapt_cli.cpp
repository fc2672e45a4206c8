#include <hapt/hapt.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using namespace hapt;

struct Options {
    std::string data_dir;
    std::string from_csv;
    std::string learner = "knn";
    std::string learners;
    int k = 12;
    int max_depth = 10;
    double min_leaf_weight = 1e-4;
    int bins = 4;
    int trees = 10;
    int subset = 0;
    double ridge = -1.0;
    int rounds = 10;
    int folds = 10;
    std::uint64_t seed = 42;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string format = "text";
    std::string out;
    std::string model;
    std::string model_out;
};

struct Validation {
    std::vector<std::string> problems;
    void require(bool ok, std::string msg) {
        if (!ok) problems.push_back(std::move(msg));
    }
    void raise() const {
        if (problems.empty()) return;
        std::string msg = "invalid configuration:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw ConfigError(msg);
    }
};

OutputFormat parse_format(const std::string& s, Validation& v) {
    if (s == "text") return OutputFormat::Text;
    if (s == "json") return OutputFormat::Json;
    if (s == "csv") return OutputFormat::Csv;
    v.problems.push_back("--format must be one of text, json, csv (got '" + s + "')");
    return OutputFormat::Text;
}

LearnerSpec spec_for(Family f, const Options& o) {
    LearnerSpec s = LearnerSpec::defaults(f);
    s.k = o.k;
    if (f != Family::DecisionStump) s.max_depth = o.max_depth;
    s.min_leaf_weight = o.min_leaf_weight;
    s.bins = o.bins;
    s.trees = o.trees;
    if (o.subset > 0) s.subset = o.subset;
    if (o.ridge >= 0.0) s.ridge = o.ridge;
    return s;
}

void validate_common(const Options& o, Validation& v, bool needs_cv) {
    v.require(o.k >= 1, "--k must be ≥ 1");
    v.require(o.max_depth >= 1, "--max-depth must be ≥ 1");
    v.require(o.min_leaf_weight >= 0.0 && o.min_leaf_weight < 0.5, "--min-leaf-weight must be in [0, 0.5)");
    v.require(o.bins >= 2, "--bins must be ≥ 2");
    v.require(o.trees >= 1, "--trees must be ≥ 1");
    v.require(o.subset >= 0, "--subset must be ≥ 1 (or 0 for the default)");
    v.require(o.ridge == -1.0 || o.ridge >= 0.0, "--ridge must be ≥ 0");
    v.require(o.rounds >= 1, "--rounds must be ≥ 1");
    if (needs_cv) v.require(o.folds >= 2, "--folds: folds must be ≥ 2");
    v.require(o.data_dir.empty() || o.from_csv.empty(), "--data-dir and --from-csv are mutually exclusive");
}

/// Dataset from --from-csv, or the HAPT directory reduced to the fifteen
/// body-acceleration features.
Dataset load_input(const Options& o, std::string& source) {
    if (!o.from_csv.empty()) {
        source = "csv:" + o.from_csv;
        return read_csv(o.from_csv);
    }
    std::string dir = o.data_dir;
    if (dir.empty())
        if (const char* env = std::getenv("HAPT_DATA_DIR")) dir = env;
    if (dir.empty()) throw ConfigError("no input: pass --data-dir, --from-csv, or set HAPT_DATA_DIR");
    source = "data-dir:" + dir;
    const auto names = body_acc_feature_names();
    return select_features(load_hapt(dir), names);
}

template <typename Fn>
void emit(const std::string& out_path, Fn&& write) {
    if (out_path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + out_path);
    write(out);
    if (!out) throw DataError("write failed: " + out_path);
}

void print_class_counts(const Dataset& ds) {
    const auto counts = ds.class_counts();
    for (int c = 0; c < ds.num_classes; ++c)
        std::cout << "  " << (c + 1) << ' ' << class_name(c) << ": " << counts[static_cast<std::size_t>(c)] << '\n';
}

int cmd_ingest(const Options& o) {
    Validation v;
    v.require(!o.out.empty(), "--out is required for ingest");
    v.require(o.data_dir.empty() || o.from_csv.empty(), "--data-dir and --from-csv are mutually exclusive");
    v.raise();
    std::string source;
    const auto ds = load_input(o, source);
    write_csv(o.out, ds);
    std::cout << "wrote " << o.out << ": " << ds.rows() << " rows, " << ds.dim() << " features + activity_id,"
              << "activity_name\n";
    std::cout << "source: " << source << "\ndigest: " << dataset_digest(ds) << "\nclass counts:\n";
    print_class_counts(ds);
    return 0;
}

int cmd_summarize(const Options& o) {
    Validation v;
    const auto format = parse_format(o.format, v);
    v.raise();
    std::string source;
    const auto ds = load_input(o, source);
    const auto rows = summarize_by_activity(ds);
    emit(o.out, [&](std::ostream& out) { write_summary_report(out, format, ds, rows); });
    return 0;
}

int cmd_evaluate(const Options& o) {
    Validation v;
    validate_common(o, v, true);
    const auto format = parse_format(o.format, v);
    const auto family = parse_family(o.learner);
    v.require(family.has_value(), "--learner '" + o.learner + "' unknown; valid: " + valid_family_keys());
    v.raise();

    RunConfig cfg;
    cfg.command = "evaluate";
    cfg.spec = spec_for(*family, o);
    cfg.folds = o.folds;
    cfg.rounds = o.rounds;
    cfg.seed = o.seed;
    cfg.format = format;
    const auto ds = load_input(o, cfg.data_source);
    const auto problems = cfg.spec.problems(ds.dim());
    if (!problems.empty()) {
        Validation pv;
        for (const auto& p : problems) pv.problems.push_back(p);
        pv.raise();
    }
    const auto result = cross_validate(cfg.spec, ds, o.folds, o.rounds, o.seed, o.threads);
    emit(o.out, [&](std::ostream& out) { write_evaluate_report(out, cfg, ds, result); });
    return 0;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_compare(const Options& o) {
    Validation v;
    validate_common(o, v, true);
    const auto format = parse_format(o.format, v);
    std::vector<LearnerSpec> specs;
    RunConfig cfg;
    if (o.learners.empty()) {
        for (const auto& info : kFamilies) specs.push_back(spec_for(info.family, o));
    } else {
        for (const auto& key : split_list(o.learners)) {
            const auto f = parse_family(key);
            v.require(f.has_value(), "--learners: '" + key + "' unknown; valid: " + valid_family_keys());
            if (f) specs.push_back(spec_for(*f, o));
        }
        v.require(!specs.empty() || !v.problems.empty(), "--learners is empty");
    }
    v.raise();
    for (const auto& s : specs) cfg.learners.emplace_back(family_key(s.family));

    cfg.command = "compare";
    cfg.spec = specs.front();
    cfg.folds = o.folds;
    cfg.rounds = o.rounds;
    cfg.seed = o.seed;
    cfg.format = format;
    const auto ds = load_input(o, cfg.data_source);
    const auto report = compare(specs, ds, o.folds, o.rounds, o.seed, o.threads);
    emit(o.out, [&](std::ostream& out) { write_compare_report(out, cfg, ds, report); });
    return 0;
}

int cmd_train(const Options& o) {
    Validation v;
    validate_common(o, v, false);
    const auto family = parse_family(o.learner);
    v.require(family.has_value(), "--learner '" + o.learner + "' unknown; valid: " + valid_family_keys());
    v.require(!o.model_out.empty(), "--model-out is required for train");
    v.raise();

    std::string source;
    const auto ds = load_input(o, source);
    const auto spec = spec_for(*family, o);
    spec.validate(ds.dim());
    ModelFile mf;
    mf.ensemble = boost_fit(spec, ds, o.rounds, o.seed, BoostOptions{o.threads, {}});
    mf.feature_names = ds.feature_names;
    mf.dataset_rows = ds.rows();
    mf.dataset_digest = dataset_digest(ds);
    save_model(o.model_out, mf);
    std::cout << "trained " << family_key(spec.family) << " with " << mf.ensemble.rounds.size() << "/" << o.rounds
              << " boosting rounds on " << ds.rows() << " rows (seed " << o.seed << ", digest " << mf.dataset_digest
              << ")\nwrote " << o.model_out << '\n';
    return 0;
}

int cmd_predict(const Options& o) {
    Validation v;
    v.require(!o.model.empty(), "--model is required for predict");
    v.require(!o.from_csv.empty(), "--from-csv (input rows) is required for predict");
    v.raise();

    const auto mf = load_model(o.model);
    const auto table = read_csv_table(o.from_csv);

    std::vector<std::string> missing, extra;
    std::vector<std::size_t> source;
    for (const auto& name : mf.feature_names) {
        const auto it = std::find(table.feature_names.begin(), table.feature_names.end(), name);
        if (it == table.feature_names.end())
            missing.push_back(name);
        else
            source.push_back(static_cast<std::size_t>(it - table.feature_names.begin()));
    }
    for (const auto& name : table.feature_names)
        if (std::find(mf.feature_names.begin(), mf.feature_names.end(), name) == mf.feature_names.end())
            extra.push_back(name);
    if (!missing.empty() || !extra.empty()) {
        std::string msg = "input columns do not match the model's features";
        if (!missing.empty()) {
            msg += "; missing:";
            for (const auto& m : missing) msg += " " + m;
        }
        if (!extra.empty()) {
            msg += "; unexpected:";
            for (const auto& e : extra) msg += " " + e;
        }
        throw DataError(msg);
    }

    std::vector<int> predictions(table.features.rows());
    parallel_for(predictions.size(), o.threads, [&](std::size_t r) {
        std::vector<double> x(source.size());
        for (std::size_t c = 0; c < source.size(); ++c) x[c] = table.features(r, source[c]);
        predictions[r] = boost_predict(mf.ensemble, x);
    });
    emit(o.out, [&](std::ostream& out) {
        out << "row,activity_id,activity_name\n";
        for (std::size_t r = 0; r < predictions.size(); ++r)
            out << r << ',' << (predictions[r] + 1) << ',' << class_name(predictions[r]) << '\n';
    });
    return 0;
}

void add_input_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--data-dir", o.data_dir, "HAPT distribution directory (default: $HAPT_DATA_DIR)");
    cmd->add_option("--from-csv", o.from_csv, "CSV written by 'ingest' instead of the HAPT directory");
}

void add_learner_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--learner", o.learner, "learner family: " + valid_family_keys())->capture_default_str();
    cmd->add_option("--k", o.k, "neighbors for knn")->capture_default_str();
    cmd->add_option("--max-depth", o.max_depth, "tree depth limit")->capture_default_str();
    cmd->add_option("--min-leaf-weight", o.min_leaf_weight, "minimum child weight, fraction of total")
        ->capture_default_str();
    cmd->add_option("--bins", o.bins, "intervals per multiway split")->capture_default_str();
    cmd->add_option("--trees", o.trees, "random forest size")->capture_default_str();
    cmd->add_option("--subset", o.subset, "features per node for random trees (0: ceil(sqrt(d)))")
        ->capture_default_str();
    cmd->add_option("--ridge", o.ridge, "ridge for discriminants/regressions (negative: scale-aware default)")
        ->capture_default_str();
    cmd->add_option("--rounds", o.rounds, "AdaBoost rounds T")->capture_default_str();
    cmd->add_option("--seed", o.seed, "seed for folds, boosting and randomized learners")->capture_default_str();
    cmd->add_option("--threads", o.threads, "worker threads (results do not depend on it)")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boosted activity recognition on HAPT body-acceleration features"};
    app.require_subcommand(1);
    Options o;

    auto* ingest = app.add_subcommand("ingest", "load HAPT, keep the 15 tBodyAcc features, write CSV");
    add_input_flags(ingest, o);
    ingest->add_option("--out", o.out, "output CSV path");

    auto* summarize = app.add_subcommand("summarize", "per-activity feature statistics");
    add_input_flags(summarize, o);
    summarize->add_option("--format", o.format, "text, json or csv")->capture_default_str();
    summarize->add_option("--out", o.out, "output path (default: stdout)");

    auto* evaluate = app.add_subcommand("evaluate", "stratified k-fold CV of one boosted learner");
    add_input_flags(evaluate, o);
    add_learner_flags(evaluate, o);
    evaluate->add_option("--folds", o.folds, "cross-validation folds")->capture_default_str();
    evaluate->add_option("--format", o.format, "text, json or csv")->capture_default_str();
    evaluate->add_option("--out", o.out, "output path (default: stdout)");

    auto* cmp = app.add_subcommand("compare", "CV comparison of boosted learners");
    add_input_flags(cmp, o);
    add_learner_flags(cmp, o);
    cmp->add_option("--learners", o.learners, "comma-separated subset (default: all twelve)");
    cmp->add_option("--folds", o.folds, "cross-validation folds")->capture_default_str();
    cmp->add_option("--format", o.format, "text, json or csv")->capture_default_str();
    cmp->add_option("--out", o.out, "output path (default: stdout)");

    auto* train = app.add_subcommand("train", "fit one boosted ensemble on all rows and save it");
    add_input_flags(train, o);
    add_learner_flags(train, o);
    train->add_option("--model-out", o.model_out, "model file to write");

    auto* pred = app.add_subcommand("predict", "label rows of a CSV with a saved model");
    pred->add_option("--model", o.model, "model file from 'train'");
    pred->add_option("--from-csv", o.from_csv, "input CSV; columns must match the model's features");
    pred->add_option("--out", o.out, "labels CSV path (default: stdout)");
    pred->add_option("--threads", o.threads, "worker threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*ingest) return cmd_ingest(o);
        if (*summarize) return cmd_summarize(o);
        if (*evaluate) return cmd_evaluate(o);
        if (*cmp) return cmd_compare(o);
        if (*train) return cmd_train(o);
        if (*pred) return cmd_predict(o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
    return 4;
}
