#ifndef HAPT_TESTS_SUPPORT_HPP
#define HAPT_TESTS_SUPPORT_HPP

#include "oracles.hpp"

#include <hapt/hapt.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <unistd.h>

namespace testing_support {

using namespace hapt;

inline double normal(Rng& rng) {
    const double u1 = 1.0 - rng.unit();
    const double u2 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline std::vector<std::string> generic_names(std::size_t d) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < d; ++i) out.push_back("f" + std::to_string(i));
    return out;
}

/// Gaussian blobs: `per_class` rows for each of `k` classes around random
/// centers in [-2, 2]^d with unit-scale noise * spread.
inline Dataset blobs(std::size_t per_class, std::size_t d, int k, std::uint64_t seed, double spread = 1.0,
                     int num_classes = 0) {
    Rng rng(seed);
    Dataset ds;
    ds.num_classes = num_classes > 0 ? num_classes : k;
    ds.features = Matrix(0, d);
    ds.feature_names = generic_names(d);
    std::vector<std::vector<double>> centers(static_cast<std::size_t>(k), std::vector<double>(d));
    for (auto& c : centers)
        for (double& v : c) v = 4.0 * rng.unit() - 2.0;
    std::vector<double> row(d);
    for (std::size_t i = 0; i < per_class * static_cast<std::size_t>(k); ++i) {
        const int c = static_cast<int>(i % static_cast<std::size_t>(k));
        for (std::size_t f = 0; f < d; ++f) row[f] = centers[static_cast<std::size_t>(c)][f] + spread * normal(rng);
        ds.features.append_row(row);
        ds.labels.push_back(c);
    }
    return ds;
}

/// Oracle training instance: N <= 50 rows, d <= 3, integer weights 1..30,
/// every class with at least six rows.
inline oracle::Data oracle_instance(std::uint64_t seed) {
    Rng rng(seed);
    oracle::Data d;
    d.k = 2 + static_cast<int>(rng.below(3));                       // 2..4 classes
    const std::size_t dim = 1 + rng.below(3);                         // 1..3 features
    const std::size_t n = 6 * static_cast<std::size_t>(d.k) + rng.below(51 - 6 * static_cast<std::size_t>(d.k));
    const double spread = 0.4 + 1.2 * rng.unit();
    std::vector<std::vector<double>> centers(static_cast<std::size_t>(d.k), std::vector<double>(dim));
    for (auto& c : centers)
        for (double& v : c) v = 4.0 * rng.unit() - 2.0;
    d.x = Matrix(0, dim);
    std::vector<double> row(dim);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = i < 6 * static_cast<std::size_t>(d.k) ? static_cast<int>(i % static_cast<std::size_t>(d.k))
                                                             : static_cast<int>(rng.below(static_cast<std::uint64_t>(d.k)));
        for (std::size_t f = 0; f < dim; ++f) row[f] = centers[static_cast<std::size_t>(c)][f] + spread * normal(rng);
        d.x.append_row(row);
        d.y.push_back(c);
        d.w.push_back(1 + static_cast<long long>(rng.below(30)));
    }
    return d;
}

inline Dataset to_dataset(const oracle::Data& d) {
    Dataset ds;
    ds.features = d.x;
    ds.labels = d.y;
    ds.num_classes = d.k;
    ds.feature_names = generic_names(d.x.cols());
    return ds;
}

/// Queries drawn uniformly from the training bounding box widened by one unit.
inline std::vector<std::vector<double>> queries(const Matrix& x, std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> lo(x.cols(), 1e300), hi(x.cols(), -1e300);
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t f = 0; f < x.cols(); ++f) {
            lo[f] = std::min(lo[f], x(i, f));
            hi[f] = std::max(hi[f], x(i, f));
        }
    std::vector<std::vector<double>> out(count, std::vector<double>(x.cols()));
    for (auto& q : out)
        for (std::size_t f = 0; f < q.size(); ++f) q[f] = lo[f] - 1.0 + (hi[f] - lo[f] + 2.0) * rng.unit();
    return out;
}

struct OracleOutcome {
    Family family;
    std::size_t queries = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
};

/// Fits `family` on several oracle instances and compares predictions with
/// the brute-force reference on training rows plus random queries.
inline OracleOutcome oracle_check(Family family, std::uint64_t seed, std::size_t instances = 6,
                                  std::size_t queries_per_instance = 40) {
    OracleOutcome out{family, 0, 0, {}};
    for (std::size_t t = 0; t < instances; ++t) {
        const std::uint64_t s = mix_seed(seed, t);
        const auto d = oracle_instance(s);
        const auto ds = to_dataset(d);
        const auto w = d.weights();

        LearnerSpec spec = LearnerSpec::defaults(family);
        spec.seed = s;
        const int depths[] = {1, 3, 10};
        spec.k = static_cast<int>(1 + (s % 13));
        if (family != Family::DecisionStump) spec.max_depth = depths[t % 3];
        spec.min_leaf_weight = (t % 2) ? 0.05 : 0.0;
        spec.bins = 2 + static_cast<int>(t % 3);
        spec.trees = 5;
        const Model model = fit(spec, ds, w);

        oracle::TreeParams tp;
        tp.max_depth = spec.family == Family::DecisionStump ? 1 : spec.max_depth;
        tp.min_leaf_fraction = spec.min_leaf_weight;
        std::function<int(const std::vector<double>&)> ref;
        switch (family) {
        case Family::Knn:
            ref = [&, k = spec.k](const std::vector<double>& q) { return oracle::knn(d, q, k); };
            break;
        case Family::DecisionStump:
        case Family::DecisionTree: {
            auto tree = std::make_shared<oracle::Tree>(oracle::tree(d, tp));
            ref = [tree](const std::vector<double>& q) { return tree->predict(q); };
            break;
        }
        case Family::MultiwayTree: {
            tp.bins = spec.bins;
            auto tree = std::make_shared<oracle::Tree>(oracle::tree(d, tp));
            ref = [tree](const std::vector<double>& q) { return tree->predict(q); };
            break;
        }
        case Family::RandomTree: {
            tp.subset = spec.subset_size(d.x.cols());
            Rng rng(spec.seed);
            auto tree = std::make_shared<oracle::Tree>(oracle::tree(d, tp, &rng));
            ref = [tree](const std::vector<double>& q) { return tree->predict(q); };
            break;
        }
        case Family::RandomForest: {
            tp.subset = spec.subset_size(d.x.cols());
            auto f = std::make_shared<oracle::Forest>(oracle::forest(d, tp, spec.trees, spec.seed));
            ref = [f](const std::vector<double>& q) { return f->predict(q); };
            break;
        }
        case Family::NaiveBayes:
            ref = [&](const std::vector<double>& q) { return oracle::gaussian_nb(d, q); };
            break;
        case Family::KernelNaiveBayes:
            ref = [&](const std::vector<double>& q) { return oracle::kernel_nb(d, q); };
            break;
        case Family::Lda:
            ref = [&](const std::vector<double>& q) { return oracle::lda(d, q); };
            break;
        case Family::Qda:
            ref = [&](const std::vector<double>& q) { return oracle::qda(d, q); };
            break;
        case Family::LinearRegressionOvr:
        case Family::VectorLinearRegression: {
            auto beta = std::make_shared<oracle::Mat>(oracle::regression(d));
            ref = [beta](const std::vector<double>& q) { return oracle::regression_predict(*beta, q); };
            break;
        }
        }

        auto check = [&](const std::vector<double>& q) {
            ++out.queries;
            const int got = predict(model, q);
            const int want = ref(q);
            if (got != want) {
                if (out.mismatches == 0) {
                    out.first_mismatch = "instance " + std::to_string(t) + ": got " + std::to_string(got) +
                                         ", oracle " + std::to_string(want) + " at (";
                    for (double v : q) out.first_mismatch += format_double(v) + " ";
                    out.first_mismatch += ")";
                }
                ++out.mismatches;
            }
        };
        for (std::size_t i = 0; i < d.x.rows(); ++i) {
            const auto r = d.x.row(i);
            check({r.begin(), r.end()});
        }
        for (const auto& q : queries(d.x, queries_per_instance, s ^ 0xABCDEFULL)) check(q);
    }
    return out;
}

/// Writes a HAPT-style directory: features.txt (with `extra` distractor
/// names around the fifteen used ones), activity_labels.txt, Train/X_train.txt
/// and Train/y_train.txt. Returns the dataset it encodes (15 features).
inline Dataset write_hapt_fixture(const std::filesystem::path& dir, std::size_t per_class, std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "Train");
    Dataset ds = blobs(per_class, kBodyAccFeatures.size(), kNumActivities, seed, 0.8);
    ds.feature_names = body_acc_feature_names();

    {
        std::ofstream f(dir / "features.txt");
        f << "tGravityAcc-Mean-1\n";
        for (const auto& n : ds.feature_names) f << n << '\n';
        f << "fBodyGyro-Energy-3\n";
    }
    {
        std::ofstream f(dir / "activity_labels.txt");
        for (int id = 1; id <= kNumActivities; ++id) f << id << ' ' << kActivityNames[static_cast<std::size_t>(id - 1)] << '\n';
    }
    {
        std::ofstream x(dir / "Train" / "X_train.txt");
        std::ofstream y(dir / "Train" / "y_train.txt");
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            x << format_double(0.5);
            for (double v : ds.row(i)) x << ' ' << format_double(v);
            x << ' ' << format_double(-0.25) << '\n';
            y << ds.labels[i] + 1 << '\n';
        }
    }
    return ds;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("hapt_test_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

/// HAPT directory from HAPT_DATA_DIR, if set and present.
inline std::optional<std::filesystem::path> hapt_data_dir() {
    const char* env = std::getenv("HAPT_DATA_DIR");
    if (!env || !*env) return std::nullopt;
    std::filesystem::path p(env);
    if (!std::filesystem::exists(p / "Train" / "X_train.txt")) return std::nullopt;
    return p;
}

} // namespace testing_support

#endif // HAPT_TESTS_SUPPORT_HPP
