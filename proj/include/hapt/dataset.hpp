#ifndef HAPT_DATASET_HPP
#define HAPT_DATASET_HPP

#include <hapt/activity.hpp>
#include <hapt/digest.hpp>
#include <hapt/error.hpp>
#include <hapt/matrix.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hapt {

/// The fifteen body-acceleration attributes used by the activity model, in
/// order. Spellings are those of features.txt in the HAPT distribution.
inline constexpr std::array<std::string_view, 15> kBodyAccFeatures = {
    "tBodyAcc-Mean-1", "tBodyAcc-Mean-2", "tBodyAcc-Mean-3",
    "tBodyAcc-STD-1",  "tBodyAcc-STD-2",  "tBodyAcc-STD-3",
    "tBodyAcc-Mad-1",  "tBodyAcc-Mad-2",  "tBodyAcc-Mad-3",
    "tBodyAcc-Max-1",  "tBodyAcc-Max-2",  "tBodyAcc-Max-3",
    "tBodyAcc-Min-1",  "tBodyAcc-Min-2",  "tBodyAcc-Min-3",
};

inline std::vector<std::string> body_acc_feature_names() {
    return {kBodyAccFeatures.begin(), kBodyAccFeatures.end()};
}

/// Feature matrix with one class index (activity id - 1) per row.
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    int num_classes = kNumActivities;

    std::size_t rows() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }
    std::span<const double> row(std::size_t i) const { return features.row(i); }

    /// Throws std::invalid_argument when the structural invariants fail.
    void validate() const {
        if (rows() == 0 || dim() == 0) throw std::invalid_argument("dataset is empty");
        if (labels.size() != rows()) throw std::invalid_argument("row/label count mismatch");
        if (feature_names.size() != dim())
            throw std::invalid_argument("feature name count does not match column count");
        for (int y : labels)
            if (y < 0 || y >= num_classes)
                throw std::invalid_argument("label outside 0.." + std::to_string(num_classes - 1));
        for (double v : features.data())
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
    }

    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
        for (int y : labels) ++counts[static_cast<std::size_t>(y)];
        return counts;
    }

    /// Rows selected by index, in the given order.
    Dataset subset(std::span<const std::size_t> indices) const {
        Dataset out;
        out.feature_names = feature_names;
        out.num_classes = num_classes;
        out.features = Matrix(indices.size(), dim());
        out.labels.reserve(indices.size());
        for (std::size_t i = 0; i < indices.size(); ++i) {
            const auto src = row(indices[i]);
            std::copy(src.begin(), src.end(), out.features.row(i).begin());
            out.labels.push_back(labels[indices[i]]);
        }
        return out;
    }
};

/// Content fingerprint over shape, names, values (bit patterns) and labels.
inline std::string dataset_digest(const Dataset& ds) {
    Fnv1a h;
    h.u64(ds.rows());
    h.u64(ds.dim());
    h.u64(static_cast<std::uint64_t>(ds.num_classes));
    for (const auto& n : ds.feature_names) h.str(n);
    for (double v : ds.features.data()) h.f64(v);
    for (int y : ds.labels) h.u64(static_cast<std::uint64_t>(y));
    return h.hex();
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("missing file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Splits text into lines, dropping a trailing '\r' from each.
inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

inline bool is_blank(std::string_view s) {
    return s.find_first_not_of(" \t") == std::string_view::npos;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view token) {
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<long> parse_int(std::string_view token) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
    return v;
}

inline std::string where(const std::filesystem::path& file, std::size_t line) {
    return file.string() + ":" + std::to_string(line);
}

inline std::vector<std::string> read_feature_names(const std::filesystem::path& path) {
    const auto text = read_file(path);
    std::vector<std::string> names;
    std::size_t lineno = 0;
    for (auto line : split_lines(text)) {
        ++lineno;
        if (is_blank(line)) continue;
        const auto tokens = split_ws(line);
        // Either "<index> <name>" or a bare "<name>".
        if (tokens.size() == 2 && parse_int(tokens[0])) {
            names.emplace_back(tokens[1]);
        } else if (tokens.size() == 1) {
            names.emplace_back(tokens[0]);
        } else {
            throw DataError(where(path, lineno) + ": expected '<index> <name>'");
        }
    }
    if (names.empty()) throw DataError(path.string() + ": no feature names");
    return names;
}

inline void check_activity_labels(const std::filesystem::path& path) {
    const auto text = read_file(path);
    std::array<bool, kNumActivities> seen{};
    std::size_t lineno = 0;
    for (auto line : split_lines(text)) {
        ++lineno;
        if (is_blank(line)) continue;
        const auto tokens = split_ws(line);
        const auto id = tokens.size() == 2 ? parse_int(tokens[0]) : std::nullopt;
        if (!id) throw DataError(where(path, lineno) + ": expected '<id> <NAME>'");
        if (*id < 1 || *id > kNumActivities)
            throw DataError(where(path, lineno) + ": activity id outside 1..12");
        if (kActivityNames[static_cast<std::size_t>(*id - 1)] != tokens[1])
            throw DataError(where(path, lineno) + ": activity " + std::to_string(*id) + " is '" +
                            std::string(tokens[1]) + "', expected '" +
                            std::string(kActivityNames[static_cast<std::size_t>(*id - 1)]) + "'");
        seen[static_cast<std::size_t>(*id - 1)] = true;
    }
    for (int i = 0; i < kNumActivities; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw DataError(path.string() + ": activity id " + std::to_string(i + 1) + " missing");
}

} // namespace detail

/// Loads the HAPT Train partition: features.txt, activity_labels.txt,
/// Train/X_train.txt and Train/y_train.txt under data_dir. All columns are
/// kept; rows stay in file order.
inline Dataset load_hapt(const std::filesystem::path& data_dir) {
    using namespace detail;
    const auto features_path = data_dir / "features.txt";
    const auto labels_path = data_dir / "activity_labels.txt";
    const auto x_path = data_dir / "Train" / "X_train.txt";
    const auto y_path = data_dir / "Train" / "y_train.txt";
    for (const auto& p : {features_path, labels_path, x_path, y_path})
        if (!std::filesystem::is_regular_file(p)) throw DataError("missing file: " + p.string());

    Dataset ds;
    ds.feature_names = read_feature_names(features_path);
    check_activity_labels(labels_path);
    const std::size_t d = ds.feature_names.size();

    const auto x_text = read_file(x_path);
    std::vector<double> values;
    std::size_t n = 0;
    std::size_t lineno = 0;
    for (auto line : split_lines(x_text)) {
        ++lineno;
        if (is_blank(line)) continue;
        const auto tokens = split_ws(line);
        if (tokens.size() != d)
            throw DataError(where(x_path, lineno) + ": expected " + std::to_string(d) + " values, found " +
                            std::to_string(tokens.size()));
        for (std::size_t c = 0; c < d; ++c) {
            const auto v = parse_double(tokens[c]);
            if (!v)
                throw DataError(where(x_path, lineno) + ", column " + std::to_string(c + 1) +
                                ": unparsable or non-finite value '" + std::string(tokens[c]) + "'");
            values.push_back(*v);
        }
        ++n;
    }

    const auto y_text = read_file(y_path);
    lineno = 0;
    for (auto line : split_lines(y_text)) {
        ++lineno;
        if (is_blank(line)) continue;
        const auto tokens = split_ws(line);
        const auto id = tokens.size() == 1 ? parse_int(tokens[0]) : std::nullopt;
        if (!id) throw DataError(where(y_path, lineno) + ", column 1: expected one integer label");
        if (*id < 1 || *id > kNumActivities)
            throw DataError(where(y_path, lineno) + ": label " + std::to_string(*id) + " outside 1..12");
        ds.labels.push_back(static_cast<int>(*id - 1));
    }

    if (ds.labels.size() != n)
        throw DataError("row/label count mismatch: " + x_path.string() + " has " + std::to_string(n) +
                        " rows, " + y_path.string() + " has " + std::to_string(ds.labels.size()));
    if (n == 0) throw DataError(x_path.string() + ": no rows");

    ds.features = Matrix(n, d);
    ds.features.data() = std::move(values);
    return ds;
}

/// Column projection onto `names`, in the requested order.
inline Dataset select_features(const Dataset& ds, std::span<const std::string> names) {
    if (names.empty()) throw DataError("select_features: no feature names requested");
    std::map<std::string_view, std::size_t> requested;
    for (const auto& n : names)
        if (!requested.emplace(n, 0).second) throw DataError("duplicate feature name: " + n);

    std::map<std::string_view, std::vector<std::size_t>> positions;
    for (std::size_t i = 0; i < ds.feature_names.size(); ++i)
        if (requested.count(ds.feature_names[i])) positions[ds.feature_names[i]].push_back(i);

    std::vector<std::size_t> source;
    for (const auto& n : names) {
        const auto it = positions.find(n);
        if (it == positions.end()) throw DataError("unknown feature name: " + n);
        if (it->second.size() != 1)
            throw DataError("feature name '" + n + "' is not unique in the source (" +
                            std::to_string(it->second.size()) + " columns)");
        source.push_back(it->second.front());
    }

    Dataset out;
    out.labels = ds.labels;
    out.num_classes = ds.num_classes;
    out.feature_names.assign(names.begin(), names.end());
    out.features = Matrix(ds.rows(), names.size());
    for (std::size_t r = 0; r < ds.rows(); ++r)
        for (std::size_t c = 0; c < source.size(); ++c) out.features(r, c) = ds.features(r, source[c]);
    return out;
}

inline Dataset select_features(const Dataset& ds, std::initializer_list<std::string> names) {
    const std::vector<std::string> v(names);
    return select_features(ds, std::span<const std::string>(v));
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// CSV export: feature columns, then activity_id and activity_name.
inline void write_csv(std::ostream& out, const Dataset& ds) {
    for (const auto& n : ds.feature_names) out << n << ',';
    out << "activity_id,activity_name\n";
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (double v : ds.row(r)) out << format_double(v) << ',';
        const int y = ds.labels[r];
        out << (y + 1) << ',' << class_name(y) << '\n';
    }
}

inline void write_csv(const std::filesystem::path& path, const Dataset& ds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_csv(out, ds);
    if (!out) throw DataError("write failed: " + path.string());
}

/// Parsed CSV table. Label columns are optional so the same reader serves
/// prediction inputs.
struct CsvTable {
    std::vector<std::string> feature_names;
    Matrix features;
    std::optional<std::vector<int>> labels;
};

inline CsvTable read_csv_table(const std::filesystem::path& path) {
    using namespace detail;
    const auto text = read_file(path);
    const auto lines = split_lines(text);
    std::size_t first = 0;
    while (first < lines.size() && is_blank(lines[first])) ++first;
    if (first == lines.size()) throw DataError(path.string() + ": empty CSV");

    auto split_commas = [](std::string_view line) {
        std::vector<std::string_view> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        return cells;
    };

    const auto header = split_commas(lines[first]);
    std::size_t d = header.size();
    bool has_labels = false;
    if (header.size() >= 2 && header[header.size() - 2] == "activity_id" && header.back() == "activity_name") {
        has_labels = true;
        d -= 2;
    }
    CsvTable table;
    for (std::size_t c = 0; c < d; ++c) {
        if (header[c].empty()) throw DataError(where(path, first + 1) + ": empty column name");
        table.feature_names.emplace_back(header[c]);
    }
    if (d == 0) throw DataError(path.string() + ": no feature columns");
    if (has_labels) table.labels.emplace();

    table.features = Matrix(0, d);
    std::vector<double> row(d);
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        if (is_blank(lines[i])) continue;
        const auto cells = split_commas(lines[i]);
        if (cells.size() != header.size())
            throw DataError(where(path, i + 1) + ": expected " + std::to_string(header.size()) + " cells, found " +
                            std::to_string(cells.size()));
        for (std::size_t c = 0; c < d; ++c) {
            const auto v = parse_double(cells[c]);
            if (!v)
                throw DataError(where(path, i + 1) + ", column " + std::to_string(c + 1) +
                                ": unparsable or non-finite value '" + std::string(cells[c]) + "'");
            row[c] = *v;
        }
        table.features.append_row(row);
        if (has_labels) {
            const auto id = parse_int(cells[d]);
            if (!id || *id < 1) throw DataError(where(path, i + 1) + ": bad activity_id '" + std::string(cells[d]) + "'");
            table.labels->push_back(static_cast<int>(*id - 1));
        }
    }
    return table;
}

/// Reads a labelled CSV produced by write_csv.
inline Dataset read_csv(const std::filesystem::path& path, int num_classes = kNumActivities) {
    auto table = read_csv_table(path);
    if (!table.labels) throw DataError(path.string() + ": missing activity_id,activity_name columns");
    if (table.features.rows() == 0) throw DataError(path.string() + ": no data rows");
    for (int y : *table.labels)
        if (y >= num_classes) throw DataError(path.string() + ": activity_id " + std::to_string(y + 1) + " out of range");
    Dataset ds;
    ds.feature_names = std::move(table.feature_names);
    ds.features = std::move(table.features);
    ds.labels = std::move(*table.labels);
    ds.num_classes = num_classes;
    return ds;
}

} // namespace hapt

#endif // HAPT_DATASET_HPP
