#ifndef HAPT_REPORT_HPP
#define HAPT_REPORT_HPP

#include <hapt/evaluation.hpp>
#include <hapt/model_io.hpp>
#include <hapt/summary.hpp>

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

namespace hapt {

enum class OutputFormat { Text, Json, Csv };

/// Resolved configuration echoed into every report. Thread count is
/// deliberately absent: it never changes results.
struct RunConfig {
    std::string command;
    std::string data_source; // "data-dir:<path>" or "csv:<path>"
    LearnerSpec spec;
    std::vector<std::string> learners; // compare only
    int folds = 10;
    int rounds = 10;
    std::uint64_t seed = 42;
    OutputFormat format = OutputFormat::Text;
};

inline std::string_view format_name(OutputFormat f) {
    switch (f) {
    case OutputFormat::Text: return "text";
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    }
    return "text";
}

inline std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction);
    return buf;
}

/// "accuracy: AA.AA% +/- S.SS% (micro average: AA.AA%)"
inline std::string headline(const CVResult& r) {
    return "accuracy: " + percent(r.mean_accuracy) + " +/- " + percent(r.std_accuracy) +
           " (micro average: " + percent(r.micro_accuracy) + ")";
}

inline Json config_to_json(const RunConfig& cfg) {
    Json j;
    j["command"] = cfg.command;
    j["data_source"] = cfg.data_source;
    if (cfg.learners.empty())
        j["learner"] = spec_to_json(cfg.spec);
    else
        j["learners"] = cfg.learners;
    j["folds"] = cfg.folds;
    j["rounds"] = cfg.rounds;
    j["seed"] = cfg.seed;
    j["format"] = format_name(cfg.format);
    j["stratified"] = true;
    j["boosting"] = "SAMME";
    return j;
}

inline Json dataset_to_json(const Dataset& ds) {
    Json counts = Json::object();
    const auto cc = ds.class_counts();
    for (int c = 0; c < ds.num_classes; ++c) counts[class_name(c)] = cc[static_cast<std::size_t>(c)];
    return Json{{"rows", ds.rows()}, {"features", ds.feature_names}, {"digest", dataset_digest(ds)},
                {"class_counts", counts}};
}

inline Json optional_number(std::optional<double> v) { return v ? Json(*v) : Json(nullptr); }

inline Json confusion_to_json(const ConfusionMatrix& cm) {
    const auto order = display_order(cm.num_classes());
    Json classes = Json::array();
    Json counts = Json::array();
    Json per_class = Json::array();
    for (int p : order) {
        classes.push_back({{"id", p + 1}, {"name", class_name(p)}});
        Json row = Json::array();
        for (int t : order) row.push_back(cm.count(p, t));
        counts.push_back(std::move(row));
        per_class.push_back({{"id", p + 1},
                             {"name", class_name(p)},
                             {"precision", optional_number(class_precision(cm, p))},
                             {"recall", optional_number(class_recall(cm, p))}});
    }
    return Json{{"orientation", "rows=predicted,columns=true"},
                {"classes", std::move(classes)},
                {"counts", std::move(counts)},
                {"per_class", std::move(per_class)},
                {"total", cm.total()}};
}

inline Json cv_to_json(const CVResult& r) {
    return Json{{"learner", family_key(r.spec.family)},
                {"spec", spec_to_json(r.spec)},
                {"micro_accuracy", r.micro_accuracy},
                {"mean_accuracy", r.mean_accuracy},
                {"std_accuracy", r.std_accuracy},
                {"fold_accuracies", r.fold_accuracies},
                {"rounds_used", r.rounds_used},
                {"fold_digest", r.fold_digest},
                {"headline", headline(r)},
                {"confusion_matrix", confusion_to_json(r.aggregate)}};
}

/// Fixed-width confusion matrix with a precision column and a recall row.
/// Undefined precision/recall prints as an em dash.
inline void write_confusion_text(std::ostream& out, const ConfusionMatrix& cm) {
    const auto order = display_order(cm.num_classes());
    constexpr int kName = 20;
    constexpr int kCell = 7;
    auto abbrev = [](const std::string& s, std::size_t n) { return s.size() <= n ? s : s.substr(0, n); };
    out << std::left << std::setw(kName) << "pred \\ true" << std::right;
    for (std::size_t i = 0; i < order.size(); ++i) out << std::setw(kCell) << ("T" + std::to_string(i + 1));
    out << std::setw(11) << "precision" << '\n';
    for (int p : order) {
        out << std::left << std::setw(kName) << abbrev(class_name(p), kName - 1) << std::right;
        for (int t : order) out << std::setw(kCell) << cm.count(p, t);
        const auto prec = class_precision(cm, p);
        out << std::setw(11) << (prec ? percent(*prec) : std::string("—")) << '\n';
    }
    out << std::left << std::setw(kName) << "recall" << std::right;
    for (int t : order) {
        const auto rec = class_recall(cm, t);
        char buf[16];
        if (rec)
            std::snprintf(buf, sizeof buf, "%.1f", 100.0 * *rec);
        else
            std::snprintf(buf, sizeof buf, "-");
        out << std::setw(kCell) << buf;
    }
    out << '\n';
    out << "columns:";
    for (std::size_t i = 0; i < order.size(); ++i) out << " T" << (i + 1) << "=" << class_name(order[i]);
    out << '\n';
}

/// Plain-text heatmap: each cell shaded by its share of the true-class
/// column (" .:-=+*#%@" from 0 to 100%).
inline void write_heatmap_text(std::ostream& out, const ConfusionMatrix& cm) {
    static constexpr std::string_view kShades = " .:-=+*#%@";
    const auto order = display_order(cm.num_classes());
    out << "heatmap (rows = predicted, columns = true; shade = share of true column)\n";
    for (int p : order) {
        std::string line;
        for (int t : order) {
            const auto col = cm.col_sum(t);
            const double f = col ? static_cast<double>(cm.count(p, t)) / static_cast<double>(col) : 0.0;
            auto idx = static_cast<std::size_t>(f * static_cast<double>(kShades.size() - 1) + 0.5);
            if (cm.count(p, t) > 0 && idx == 0) idx = 1;
            line += kShades[std::min(idx, kShades.size() - 1)];
            line += kShades[std::min(idx, kShades.size() - 1)];
        }
        char label[32];
        std::snprintf(label, sizeof label, "%-20s", class_name(p).c_str());
        out << label << '|' << line << "|\n";
    }
}

inline void write_config_text(std::ostream& out, const RunConfig& cfg, const Dataset& ds) {
    out << "config: " << config_to_json(cfg).dump() << '\n';
    out << "dataset: " << ds.rows() << " rows x " << ds.dim() << " features, digest " << dataset_digest(ds) << '\n';
}

inline void write_evaluate_report(std::ostream& out, const RunConfig& cfg, const Dataset& ds, const CVResult& r) {
    switch (cfg.format) {
    case OutputFormat::Json: {
        Json j{{"report", "evaluate"}, {"schema_version", 1}, {"config", config_to_json(cfg)},
               {"dataset", dataset_to_json(ds)}, {"result", cv_to_json(r)}};
        out << j.dump(2) << '\n';
        break;
    }
    case OutputFormat::Csv: {
        const auto order = display_order(r.aggregate.num_classes());
        out << "# " << headline(r) << '\n';
        out << "# config " << config_to_json(cfg).dump() << '\n';
        out << "# dataset_digest " << dataset_digest(ds) << '\n';
        out << "predicted";
        for (int t : order) out << ",true_" << class_name(t);
        out << ",precision\n";
        for (int p : order) {
            out << class_name(p);
            for (int t : order) out << ',' << r.aggregate.count(p, t);
            const auto prec = class_precision(r.aggregate, p);
            out << ',' << (prec ? format_double(*prec) : std::string()) << '\n';
        }
        out << "recall";
        for (int t : order) {
            const auto rec = class_recall(r.aggregate, t);
            out << ',' << (rec ? format_double(*rec) : std::string());
        }
        out << ",\n";
        break;
    }
    case OutputFormat::Text: {
        out << headline(r) << '\n';
        write_config_text(out, cfg, ds);
        out << "fold accuracies:";
        for (double a : r.fold_accuracies) out << ' ' << percent(a);
        out << "\nboosting rounds kept per fold:";
        for (int u : r.rounds_used) out << ' ' << u;
        out << "\n\n";
        write_confusion_text(out, r.aggregate);
        out << '\n';
        write_heatmap_text(out, r.aggregate);
        break;
    }
    }
}

inline void write_compare_report(std::ostream& out, const RunConfig& cfg, const Dataset& ds,
                                  const ComparisonReport& rep) {
    switch (cfg.format) {
    case OutputFormat::Json: {
        Json rows = Json::array();
        for (const auto& row : rep.rows) {
            if (row.result)
                rows.push_back({{"learner", row.learner}, {"implemented", true}, {"result", cv_to_json(*row.result)}});
            else
                rows.push_back({{"learner", row.learner}, {"implemented", false}, {"note", row.note}});
        }
        Json j{{"report", "compare"},   {"schema_version", 1},          {"config", config_to_json(cfg)},
               {"dataset", dataset_to_json(ds)}, {"fold_digest", rep.fold_digest}, {"rows", std::move(rows)}};
        out << j.dump(2) << '\n';
        break;
    }
    case OutputFormat::Csv: {
        out << "learner,micro_accuracy,mean_accuracy,std_accuracy,note\n";
        for (const auto& row : rep.rows) {
            out << row.learner << ',';
            if (row.result)
                out << format_double(row.result->micro_accuracy) << ',' << format_double(row.result->mean_accuracy)
                    << ',' << format_double(row.result->std_accuracy) << ",\n";
            else
                out << ",,," << row.note << '\n';
        }
        break;
    }
    case OutputFormat::Text: {
        write_config_text(out, cfg, ds);
        out << "folds digest: " << rep.fold_digest << "\n\n";
        out << std::left << std::setw(34) << "Learning approach (boosted, CV)" << std::right << std::setw(12)
            << "micro acc" << std::setw(20) << "mean +/- std" << '\n';
        for (const auto& row : rep.rows) {
            out << std::left << std::setw(34) << row.learner << std::right;
            if (row.result)
                out << std::setw(12) << percent(row.result->micro_accuracy) << std::setw(20)
                    << (percent(row.result->mean_accuracy) + " +/- " + percent(row.result->std_accuracy));
            else
                out << std::setw(32) << row.note;
            out << '\n';
        }
        break;
    }
    }
}

inline void write_summary_report(std::ostream& out, OutputFormat format, const Dataset& ds,
                                 const std::vector<FeatureSummary>& rows) {
    switch (format) {
    case OutputFormat::Json: {
        Json arr = Json::array();
        for (const auto& s : rows)
            arr.push_back({{"activity_id", s.activity + 1},
                           {"activity", class_name(s.activity)},
                           {"feature", ds.feature_names[s.feature]},
                           {"count", s.count},
                           {"mean", s.mean},
                           {"std", s.std_dev},
                           {"median_abs_dev", s.median_abs_dev},
                           {"max", s.max},
                           {"min", s.min}});
        out << Json{{"report", "summarize"}, {"schema_version", 1}, {"dataset", dataset_to_json(ds)}, {"rows", arr}}
                   .dump(2)
            << '\n';
        break;
    }
    case OutputFormat::Csv:
        out << "activity_id,activity,feature,count,mean,std,median_abs_dev,max,min\n";
        for (const auto& s : rows)
            out << (s.activity + 1) << ',' << class_name(s.activity) << ',' << ds.feature_names[s.feature] << ','
                << s.count << ',' << format_double(s.mean) << ',' << format_double(s.std_dev) << ','
                << format_double(s.median_abs_dev) << ',' << format_double(s.max) << ',' << format_double(s.min)
                << '\n';
        break;
    case OutputFormat::Text: {
        out << "dataset: " << ds.rows() << " rows x " << ds.dim() << " features, digest " << dataset_digest(ds)
            << '\n';
        char buf[160];
        std::snprintf(buf, sizeof buf, "%-20s %-18s %6s %9s %9s %9s %9s %9s\n", "activity", "feature", "n", "mean",
                      "std", "mad", "max", "min");
        out << buf;
        for (const auto& s : rows) {
            std::snprintf(buf, sizeof buf, "%-20s %-18s %6zu %9.4f %9.4f %9.4f %9.4f %9.4f\n",
                          class_name(s.activity).c_str(), ds.feature_names[s.feature].c_str(), s.count, s.mean,
                          s.std_dev, s.median_abs_dev, s.max, s.min);
            out << buf;
        }
        break;
    }
    }
}

} // namespace hapt

#endif // HAPT_REPORT_HPP
