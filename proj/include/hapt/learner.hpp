#ifndef HAPT_LEARNER_HPP
#define HAPT_LEARNER_HPP

#include <hapt/learners/bayes.hpp>
#include <hapt/learners/discriminant.hpp>
#include <hapt/learners/knn.hpp>
#include <hapt/learners/regression.hpp>
#include <hapt/learners/spec.hpp>
#include <hapt/learners/tree.hpp>

#include <variant>

namespace hapt {

using TrainedModel =
    std::variant<KnnModel, StumpModel, TreeModel, ForestModel, NbModel, KdeNbModel, LdaModel, QdaModel, LinRegModel>;

/// A trained model together with the spec that produced it.
struct Model {
    LearnerSpec spec;
    TrainedModel impl;
    std::size_t dim = 0;
    int num_classes = 0;
};

/// Trains `spec` on ds with sample weights w. Deterministic in
/// (spec, ds, w); randomized families draw only from spec.seed.
inline Model fit(const LearnerSpec& spec, const Dataset& ds, std::span<const double> w) {
    check_fit_inputs(ds, w);
    spec.validate(ds.dim());
    Model m{spec, {}, ds.dim(), ds.num_classes};
    switch (spec.family) {
    case Family::Knn:
        m.impl = fit_knn(make_knn_store(ds), w, spec.k, ds.num_classes);
        break;
    case Family::DecisionStump:
        m.impl = to_stump(fit_tree(ds, w, tree_options(spec, ds.dim())));
        break;
    case Family::DecisionTree:
    case Family::MultiwayTree:
        m.impl = fit_tree(ds, w, tree_options(spec, ds.dim()));
        break;
    case Family::RandomTree: {
        Rng rng(spec.seed);
        m.impl = fit_tree(ds, w, tree_options(spec, ds.dim()), &rng);
        break;
    }
    case Family::RandomForest:
        m.impl = fit_forest(ds, w, spec);
        break;
    case Family::NaiveBayes:
        m.impl = fit_naive_bayes(ds, w);
        break;
    case Family::KernelNaiveBayes:
        m.impl = fit_kernel_naive_bayes(ds, w);
        break;
    case Family::Lda:
        m.impl = fit_lda(ds, w, spec.ridge);
        break;
    case Family::Qda:
        m.impl = fit_qda(ds, w, spec.ridge);
        break;
    case Family::LinearRegressionOvr:
        m.impl = fit_linear_regression_ovr(ds, w, spec.ridge);
        break;
    case Family::VectorLinearRegression:
        m.impl = fit_vector_linear_regression(ds, w, spec.ridge);
        break;
    }
    return m;
}

/// Class index predicted for x.
inline int predict(const Model& m, std::span<const double> x) {
    if (x.size() != m.dim)
        throw std::invalid_argument("predict: expected " + std::to_string(m.dim) + " features, got " +
                                    std::to_string(x.size()));
    return std::visit(
        [&](const auto& impl) -> int {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, KnnModel>)
                return predict_knn(impl, x);
            else
                return impl.predict(x);
        },
        m.impl);
}

inline ActivityLabel predict_label(const Model& m, std::span<const double> x) {
    return ActivityLabel::from_index(predict(m, x));
}

} // namespace hapt

#endif // HAPT_LEARNER_HPP
