#ifndef HAPT_LEARNERS_KNN_HPP
#define HAPT_LEARNERS_KNN_HPP

#include <hapt/learners/common.hpp>

#include <algorithm>
#include <memory>
#include <utility>
#include <vector>

namespace hapt {

/// Training rows kept by a k-NN model. Shared between the rounds of a
/// boosted ensemble, which differ only in their vote weights.
struct KnnStore {
    Matrix rows;
    std::vector<int> labels;
};

struct KnnModel {
    std::shared_ptr<const KnnStore> store;
    std::vector<double> weights;
    int k = 1;
    int num_classes = 0;
};

/// Indices of the k stored rows nearest to x under squared Euclidean
/// distance, nearest first; equal distances order by lower row index.
inline std::vector<std::size_t> knn_neighbors(const Matrix& rows, std::span<const double> x, std::size_t k) {
    const std::size_t n = rows.rows();
    k = std::min(k, n);
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = rows.row(i);
        double s = 0.0;
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double t = r[j] - x[j];
            s += t * t;
        }
        dist[i] = {s, i};
    }
    // pair ordering is (distance, index), which is exactly the tie rule.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
    return out;
}

/// Weighted vote over a neighbor set; lowest class index wins ties.
inline int knn_vote(std::span<const std::size_t> neighbors, std::span<const int> labels,
                    std::span<const double> weights, int num_classes) {
    std::vector<double> votes(static_cast<std::size_t>(num_classes), 0.0);
    for (auto i : neighbors) votes[static_cast<std::size_t>(labels[i])] += weights[i];
    return argmax_lowest(votes);
}

inline std::shared_ptr<const KnnStore> make_knn_store(const Dataset& ds) {
    return std::make_shared<const KnnStore>(KnnStore{ds.features, ds.labels});
}

/// k larger than the number of stored rows is clamped.
inline KnnModel fit_knn(std::shared_ptr<const KnnStore> store, std::span<const double> w, int k, int num_classes) {
    KnnModel m;
    m.k = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(k), store->rows.rows()));
    m.store = std::move(store);
    m.weights.assign(w.begin(), w.end());
    m.num_classes = num_classes;
    return m;
}

inline int predict_knn(const KnnModel& m, std::span<const double> x) {
    const auto nb = knn_neighbors(m.store->rows, x, static_cast<std::size_t>(m.k));
    return knn_vote(nb, m.store->labels, m.weights, m.num_classes);
}

} // namespace hapt

#endif // HAPT_LEARNERS_KNN_HPP
