#ifndef HAPT_LEARNERS_SPEC_HPP
#define HAPT_LEARNERS_SPEC_HPP

#include <hapt/error.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hapt {

enum class Family {
    Knn,
    DecisionStump,
    DecisionTree,
    MultiwayTree,
    RandomTree,
    RandomForest,
    NaiveBayes,
    KernelNaiveBayes,
    Lda,
    Qda,
    LinearRegressionOvr,
    VectorLinearRegression,
};

struct FamilyInfo {
    Family family;
    std::string_view key;     // CLI / file spelling
    std::string_view display; // report spelling
};

inline constexpr std::array<FamilyInfo, 12> kFamilies = {{
    {Family::RandomForest, "random_forest", "Random Forest"},
    {Family::DecisionTree, "decision_tree", "Decision Tree"},
    {Family::MultiwayTree, "multiway_tree", "Multiway Decision Tree"},
    {Family::Knn, "knn", "k-NN"},
    {Family::DecisionStump, "decision_stump", "Decision Stump"},
    {Family::LinearRegressionOvr, "linear_regression", "Linear Regression"},
    {Family::VectorLinearRegression, "vector_linear_regression", "Vector Linear Regression"},
    {Family::RandomTree, "random_tree", "Random Tree"},
    {Family::NaiveBayes, "naive_bayes", "Naive Bayes"},
    {Family::KernelNaiveBayes, "kernel_naive_bayes", "Naive Bayes (Kernel)"},
    {Family::Lda, "lda", "Linear Discriminant Analysis"},
    {Family::Qda, "qda", "Quadratic Discriminant Analysis"},
}};

/// Comparison-table learners that have no implementation here.
inline constexpr std::array<std::string_view, 5> kUnimplementedLearners = {
    "Artificial Neural Network", "Support Vector Machine", "Gradient Boosted Trees", "AutoMLP", "Deep Learning",
};

inline const FamilyInfo& family_info(Family f) {
    for (const auto& info : kFamilies)
        if (info.family == f) return info;
    throw std::logic_error("unknown family");
}

inline std::string_view family_key(Family f) { return family_info(f).key; }
inline std::string_view family_display(Family f) { return family_info(f).display; }

inline std::optional<Family> parse_family(std::string_view key) {
    for (const auto& info : kFamilies)
        if (info.key == key) return info.family;
    return std::nullopt;
}

inline std::string valid_family_keys() {
    std::string out;
    for (const auto& info : kFamilies) {
        if (!out.empty()) out += ", ";
        out += info.key;
    }
    return out;
}

/// Learner family plus its hyperparameters. Fields a family does not use
/// are ignored by it.
struct LearnerSpec {
    Family family = Family::Knn;
    int k = 12;
    int max_depth = 10;
    double min_leaf_weight = 1e-4;
    int bins = 4;
    int trees = 10;
    std::optional<int> subset;   // features per node for random trees; default ceil(sqrt(d))
    std::optional<double> ridge; // default: scale-aware, see numerics.hpp
    std::uint64_t seed = 0;

    static LearnerSpec defaults(Family f) {
        LearnerSpec s;
        s.family = f;
        if (f == Family::DecisionStump) s.max_depth = 1;
        return s;
    }

    int subset_size(std::size_t d) const {
        return subset ? *subset : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))));
    }

    /// Returns one message per violated constraint.
    std::vector<std::string> problems(std::size_t d) const {
        std::vector<std::string> out;
        if (k < 1) out.emplace_back("k must be ≥ 1");
        if (max_depth < 1) out.emplace_back("max_depth must be ≥ 1");
        if (!(min_leaf_weight >= 0.0) || !(min_leaf_weight < 0.5)) out.emplace_back("min_leaf_weight must be in [0, 0.5)");
        if (bins < 2) out.emplace_back("bins must be ≥ 2");
        if (trees < 1) out.emplace_back("trees must be ≥ 1");
        if (subset && (*subset < 1 || static_cast<std::size_t>(*subset) > d))
            out.emplace_back("subset must be in 1.." + std::to_string(d));
        if (ridge && !(*ridge >= 0.0)) out.emplace_back("ridge must be ≥ 0");
        return out;
    }

    void validate(std::size_t d) const {
        const auto p = problems(d);
        if (!p.empty()) {
            std::string msg = "invalid learner spec:";
            for (const auto& s : p) msg += " " + s + ";";
            throw ConfigError(msg);
        }
    }

    friend bool operator==(const LearnerSpec&, const LearnerSpec&) = default;
};

} // namespace hapt

#endif // HAPT_LEARNERS_SPEC_HPP
