#ifndef HAPT_MODEL_IO_HPP
#define HAPT_MODEL_IO_HPP

#include <hapt/boosting.hpp>
#include <hapt/dataset.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace hapt {

inline constexpr int kModelFormatVersion = 1;

/// A boosted ensemble plus what is needed to apply it to new CSV input.
struct ModelFile {
    BoostedEnsemble ensemble;
    std::vector<std::string> feature_names;
    std::size_t dataset_rows = 0;
    std::string dataset_digest;
};

using Json = nlohmann::json;

inline Json spec_to_json(const LearnerSpec& s) {
    Json j;
    j["family"] = family_key(s.family);
    j["k"] = s.k;
    j["max_depth"] = s.max_depth;
    j["min_leaf_weight"] = s.min_leaf_weight;
    j["bins"] = s.bins;
    j["trees"] = s.trees;
    j["subset"] = s.subset ? Json(*s.subset) : Json(nullptr);
    j["ridge"] = s.ridge ? Json(*s.ridge) : Json(nullptr);
    j["seed"] = s.seed;
    return j;
}

inline LearnerSpec spec_from_json(const Json& j) {
    LearnerSpec s;
    const auto family = parse_family(j.at("family").get<std::string>());
    if (!family) throw DataError("model file: unknown learner family " + j.at("family").dump());
    s.family = *family;
    s.k = j.at("k").get<int>();
    s.max_depth = j.at("max_depth").get<int>();
    s.min_leaf_weight = j.at("min_leaf_weight").get<double>();
    s.bins = j.at("bins").get<int>();
    s.trees = j.at("trees").get<int>();
    if (!j.at("subset").is_null()) s.subset = j.at("subset").get<int>();
    if (!j.at("ridge").is_null()) s.ridge = j.at("ridge").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

namespace detail {

inline Json matrix_to_json(const Matrix& m) {
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline Matrix matrix_from_json(const Json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != m.rows() * m.cols()) throw DataError("model file: matrix size mismatch");
    m.data() = std::move(data);
    return m;
}

inline Json tree_to_json(const TreeModel& t) {
    Json nodes = Json::array();
    for (const auto& n : t.nodes)
        nodes.push_back({{"feature", n.feature},
                         {"thresholds", n.thresholds},
                         {"children", n.children},
                         {"label", n.label},
                         {"mass", n.mass}});
    return Json{{"num_classes", t.num_classes}, {"nodes", std::move(nodes)}};
}

inline TreeModel tree_from_json(const Json& j) {
    TreeModel t;
    t.num_classes = j.at("num_classes").get<int>();
    for (const auto& n : j.at("nodes")) {
        TreeNode node;
        node.feature = n.at("feature").get<int>();
        node.thresholds = n.at("thresholds").get<std::vector<double>>();
        node.children = n.at("children").get<std::vector<int>>();
        node.label = n.at("label").get<int>();
        node.mass = n.at("mass").get<double>();
        if (!node.is_leaf() && node.children.size() != node.thresholds.size() + 1)
            throw DataError("model file: malformed tree node");
        t.nodes.push_back(std::move(node));
    }
    if (t.nodes.empty()) throw DataError("model file: empty tree");
    return t;
}

/// KNN stores are written once per file and referenced by index.
class StoreTable {
public:
    int index_of(const std::shared_ptr<const KnnStore>& s) {
        for (std::size_t i = 0; i < stores_.size(); ++i)
            if (stores_[i] == s) return static_cast<int>(i);
        stores_.push_back(s);
        return static_cast<int>(stores_.size() - 1);
    }

    Json to_json() const {
        Json arr = Json::array();
        for (const auto& s : stores_) arr.push_back({{"rows", matrix_to_json(s->rows)}, {"labels", s->labels}});
        return arr;
    }

    static std::vector<std::shared_ptr<const KnnStore>> from_json(const Json& arr) {
        std::vector<std::shared_ptr<const KnnStore>> out;
        for (const auto& s : arr)
            out.push_back(std::make_shared<const KnnStore>(
                KnnStore{matrix_from_json(s.at("rows")), s.at("labels").get<std::vector<int>>()}));
        return out;
    }

private:
    std::vector<std::shared_ptr<const KnnStore>> stores_;
};

inline Json model_to_json(const Model& m, StoreTable& stores) {
    Json j;
    j["spec"] = spec_to_json(m.spec);
    j["dim"] = m.dim;
    j["num_classes"] = m.num_classes;
    std::visit(
        [&](const auto& impl) {
            using T = std::decay_t<decltype(impl)>;
            if constexpr (std::is_same_v<T, KnnModel>) {
                j["type"] = "knn";
                j["store"] = stores.index_of(impl.store);
                j["k"] = impl.k;
                j["weights"] = impl.weights;
            } else if constexpr (std::is_same_v<T, StumpModel>) {
                j["type"] = "stump";
                j["feature"] = impl.feature;
                j["threshold"] = impl.feature < 0 ? Json(nullptr) : Json(impl.threshold);
                j["left_label"] = impl.left_label;
                j["right_label"] = impl.right_label;
            } else if constexpr (std::is_same_v<T, TreeModel>) {
                j["type"] = "tree";
                j["tree"] = tree_to_json(impl);
            } else if constexpr (std::is_same_v<T, ForestModel>) {
                j["type"] = "forest";
                Json trees = Json::array();
                for (const auto& t : impl.trees) trees.push_back(tree_to_json(t));
                j["trees"] = std::move(trees);
            } else if constexpr (std::is_same_v<T, NbModel>) {
                j["type"] = "naive_bayes";
                j["priors"] = impl.priors;
                j["means"] = impl.means;
                j["variances"] = impl.variances;
            } else if constexpr (std::is_same_v<T, KdeNbModel>) {
                j["type"] = "kernel_naive_bayes";
                j["priors"] = impl.priors;
                Json dens = Json::array();
                for (const auto& per_class : impl.densities) {
                    Json row = Json::array();
                    for (const auto& kd : per_class)
                        row.push_back({{"values", kd.values},
                                       {"weights", kd.weights},
                                       {"bandwidth", kd.bandwidth},
                                       {"total", kd.total}});
                    dens.push_back(std::move(row));
                }
                j["densities"] = std::move(dens);
            } else if constexpr (std::is_same_v<T, LdaModel>) {
                j["type"] = "lda";
                j["priors"] = impl.priors;
                j["means"] = matrix_to_json(impl.means);
                j["pooled_factor"] = matrix_to_json(impl.pooled_factor);
                j["coefficients"] = matrix_to_json(impl.coefficients);
                j["offsets"] = impl.offsets;
            } else if constexpr (std::is_same_v<T, QdaModel>) {
                j["type"] = "qda";
                j["priors"] = impl.priors;
                j["means"] = matrix_to_json(impl.means);
                Json factors = Json::array();
                for (const auto& f : impl.factors) factors.push_back(matrix_to_json(f.factor()));
                j["factors"] = std::move(factors);
                j["log_dets"] = impl.log_dets;
            } else {
                static_assert(std::is_same_v<T, LinRegModel>);
                j["type"] = "linear_regression";
                j["coefficients"] = matrix_to_json(impl.coefficients);
            }
        },
        m.impl);
    return j;
}

inline Model model_from_json(const Json& j, const std::vector<std::shared_ptr<const KnnStore>>& stores) {
    Model m;
    m.spec = spec_from_json(j.at("spec"));
    m.dim = j.at("dim").get<std::size_t>();
    m.num_classes = j.at("num_classes").get<int>();
    const auto type = j.at("type").get<std::string>();
    if (type == "knn") {
        KnnModel k;
        const auto idx = j.at("store").get<std::size_t>();
        if (idx >= stores.size()) throw DataError("model file: KNN store index out of range");
        k.store = stores[idx];
        k.k = j.at("k").get<int>();
        k.weights = j.at("weights").get<std::vector<double>>();
        k.num_classes = m.num_classes;
        if (k.weights.size() != k.store->rows.rows()) throw DataError("model file: KNN weight count mismatch");
        m.impl = std::move(k);
    } else if (type == "stump") {
        StumpModel s;
        s.feature = j.at("feature").get<int>();
        if (s.feature >= 0) s.threshold = j.at("threshold").get<double>();
        s.left_label = j.at("left_label").get<int>();
        s.right_label = j.at("right_label").get<int>();
        m.impl = s;
    } else if (type == "tree") {
        m.impl = tree_from_json(j.at("tree"));
    } else if (type == "forest") {
        ForestModel f;
        f.num_classes = m.num_classes;
        for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_json(t));
        m.impl = std::move(f);
    } else if (type == "naive_bayes") {
        NbModel nb;
        nb.priors = j.at("priors").get<std::vector<double>>();
        nb.means = j.at("means").get<std::vector<std::vector<double>>>();
        nb.variances = j.at("variances").get<std::vector<std::vector<double>>>();
        m.impl = std::move(nb);
    } else if (type == "kernel_naive_bayes") {
        KdeNbModel kde;
        kde.priors = j.at("priors").get<std::vector<double>>();
        for (const auto& per_class : j.at("densities")) {
            std::vector<KernelDensity> row;
            for (const auto& d : per_class) {
                KernelDensity kd;
                kd.values = d.at("values").get<std::vector<double>>();
                kd.weights = d.at("weights").get<std::vector<double>>();
                kd.bandwidth = d.at("bandwidth").get<double>();
                kd.total = d.at("total").get<double>();
                row.push_back(std::move(kd));
            }
            kde.densities.push_back(std::move(row));
        }
        m.impl = std::move(kde);
    } else if (type == "lda") {
        LdaModel lda;
        lda.priors = j.at("priors").get<std::vector<double>>();
        lda.means = matrix_from_json(j.at("means"));
        lda.pooled_factor = matrix_from_json(j.at("pooled_factor"));
        lda.coefficients = matrix_from_json(j.at("coefficients"));
        lda.offsets = j.at("offsets").get<std::vector<double>>();
        m.impl = std::move(lda);
    } else if (type == "qda") {
        QdaModel qda;
        qda.priors = j.at("priors").get<std::vector<double>>();
        qda.means = matrix_from_json(j.at("means"));
        for (const auto& f : j.at("factors")) qda.factors.push_back(Cholesky::from_factor(matrix_from_json(f)));
        qda.log_dets = j.at("log_dets").get<std::vector<double>>();
        m.impl = std::move(qda);
    } else if (type == "linear_regression") {
        m.impl = LinRegModel{matrix_from_json(j.at("coefficients"))};
    } else {
        throw DataError("model file: unknown model type '" + type + "'");
    }
    return m;
}

} // namespace detail

inline Json model_file_to_json(const ModelFile& mf) {
    detail::StoreTable stores;
    Json rounds = Json::array();
    for (const auto& r : mf.ensemble.rounds)
        rounds.push_back({{"alpha", r.alpha}, {"error", r.error}, {"model", detail::model_to_json(r.model, stores)}});

    Json classes = Json::array();
    for (int c = 0; c < mf.ensemble.num_classes; ++c) classes.push_back({{"id", c + 1}, {"name", class_name(c)}});

    Json j;
    j["format"] = "hapt-boosted-model";
    j["format_version"] = kModelFormatVersion;
    j["base_spec"] = spec_to_json(mf.ensemble.base_spec);
    j["rounds_requested"] = mf.ensemble.rounds_requested;
    j["seed"] = mf.ensemble.seed;
    j["num_classes"] = mf.ensemble.num_classes;
    j["dim"] = mf.ensemble.dim;
    j["feature_names"] = mf.feature_names;
    j["classes"] = std::move(classes);
    j["dataset"] = {{"rows", mf.dataset_rows}, {"digest", mf.dataset_digest}};
    j["knn_stores"] = stores.to_json();
    j["rounds"] = std::move(rounds);
    return j;
}

inline ModelFile model_file_from_json(const Json& j) {
    if (!j.contains("format_version")) throw DataError("model file: missing format_version");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
        throw DataError("model file: format_version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kModelFormatVersion) + ")");
    ModelFile mf;
    auto& ens = mf.ensemble;
    ens.base_spec = spec_from_json(j.at("base_spec"));
    ens.rounds_requested = j.at("rounds_requested").get<int>();
    ens.seed = j.at("seed").get<std::uint64_t>();
    ens.num_classes = j.at("num_classes").get<int>();
    ens.dim = j.at("dim").get<std::size_t>();
    mf.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    mf.dataset_rows = j.at("dataset").at("rows").get<std::size_t>();
    mf.dataset_digest = j.at("dataset").at("digest").get<std::string>();
    const auto stores = detail::StoreTable::from_json(j.at("knn_stores"));
    for (const auto& r : j.at("rounds"))
        ens.rounds.push_back({detail::model_from_json(r.at("model"), stores), r.at("alpha").get<double>(),
                              r.at("error").get<double>()});
    if (ens.rounds.empty()) throw DataError("model file: no rounds");
    if (mf.feature_names.size() != ens.dim) throw DataError("model file: feature name count does not match dim");
    return mf;
}

inline void save_model(const std::filesystem::path& path, const ModelFile& mf) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << model_file_to_json(mf).dump() << '\n';
    if (!out) throw DataError("write failed: " + path.string());
}

inline ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("missing file: " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw DataError("model file " + path.string() + ": " + e.what());
    }
    try {
        return model_file_from_json(j);
    } catch (const Json::exception& e) {
        throw DataError("model file " + path.string() + ": " + e.what());
    }
}

} // namespace hapt

#endif // HAPT_MODEL_IO_HPP
