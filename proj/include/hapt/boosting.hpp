#ifndef HAPT_BOOSTING_HPP
#define HAPT_BOOSTING_HPP

#include <hapt/learner.hpp>
#include <hapt/parallel.hpp>

#include <cmath>
#include <functional>
#include <vector>

namespace hapt {

inline constexpr double kMinBoostError = 1e-10;

struct BoostRound {
    Model model;
    double alpha = 0.0;
    double error = 0.0; // weighted training error of this round's model
};

struct BoostedEnsemble {
    std::vector<BoostRound> rounds;
    int num_classes = 0;
    LearnerSpec base_spec;
    int rounds_requested = 0;
    std::uint64_t seed = 0;
    std::size_t dim = 0;
};

/// Snapshot handed to a boosting observer after each round.
struct RoundTrace {
    int round = 0; // 1-based
    double error = 0.0;
    double alpha = 0.0;
    bool accepted = false;
    bool stopped = false;
    std::span<const double> weights; // distribution after the update
};

struct BoostOptions {
    unsigned threads = 1;
    std::function<void(const RoundTrace&)> observer;
};

/// SAMME vote weight ln((1 - eps) / eps) + ln(K - 1).
inline double samme_alpha(double error, int num_classes) {
    return std::log((1.0 - error) / error) + std::log(static_cast<double>(num_classes - 1));
}

namespace detail {

/// Training-set predictions of one round's model. KNN neighbor sets do not
/// depend on the weights, so they are computed once and reused.
class TrainingPredictor {
public:
    TrainingPredictor(const Dataset& ds, const LearnerSpec& spec, unsigned threads) : ds_(ds), threads_(threads) {
        if (spec.family == Family::Knn) {
            store_ = make_knn_store(ds);
            const auto k = std::min<std::size_t>(static_cast<std::size_t>(spec.k), ds.rows());
            neighbors_.resize(ds.rows());
            parallel_for(ds.rows(), threads_,
                         [&](std::size_t i) { neighbors_[i] = knn_neighbors(store_->rows, ds.row(i), k); });
        }
    }

    Model fit(const LearnerSpec& spec, std::span<const double> w) const {
        if (store_) {
            check_fit_inputs(ds_, w);
            return Model{spec, fit_knn(store_, w, spec.k, ds_.num_classes), ds_.dim(), ds_.num_classes};
        }
        return hapt::fit(spec, ds_, w);
    }

    std::vector<int> predict(const Model& m) const {
        std::vector<int> out(ds_.rows());
        if (store_) {
            const auto& knn = std::get<KnnModel>(m.impl);
            parallel_for(ds_.rows(), threads_, [&](std::size_t i) {
                out[i] = knn_vote(neighbors_[i], store_->labels, knn.weights, knn.num_classes);
            });
        } else {
            parallel_for(ds_.rows(), threads_, [&](std::size_t i) { out[i] = hapt::predict(m, ds_.row(i)); });
        }
        return out;
    }

private:
    const Dataset& ds_;
    unsigned threads_;
    std::shared_ptr<const KnnStore> store_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

} // namespace detail

/// Multi-class AdaBoost (SAMME, discrete).
///
/// Weights start uniform. Round t fits the base learner with seed
/// `seed ^ t` and current weights, and measures eps_t, the misclassified
/// weight mass:
///   - eps_t >= 1 - 1/K: the round is discarded and boosting stops. If this
///     happens in round 1 the model is kept anyway with alpha = ln(K - 1)
///     (alpha = 1 when K = 2) so the ensemble is still usable.
///   - eps_t <= 1e-10: eps_t is clamped to 1e-10, the round is kept, and
///     boosting stops.
///   - otherwise alpha_t = ln((1 - eps_t)/eps_t) + ln(K - 1); misclassified
///     weights are multiplied by exp(alpha_t) and all weights renormalized.
inline BoostedEnsemble boost_fit(const LearnerSpec& base_spec, const Dataset& ds, int rounds, std::uint64_t seed,
                                 const BoostOptions& options = {}) {
    if (rounds < 1) throw ConfigError("rounds must be ≥ 1");
    if (ds.rows() == 0) throw std::invalid_argument("boost_fit: empty dataset");
    int represented = 0;
    for (auto c : ds.class_counts()) represented += c > 0;
    if (represented < 2) throw std::invalid_argument("boost_fit: need at least two classes represented");
    base_spec.validate(ds.dim());

    const int k = ds.num_classes;
    const double max_error = 1.0 - 1.0 / static_cast<double>(k);
    BoostedEnsemble ens;
    ens.num_classes = k;
    ens.base_spec = base_spec;
    ens.rounds_requested = rounds;
    ens.seed = seed;
    ens.dim = ds.dim();

    const detail::TrainingPredictor trainer(ds, base_spec, options.threads);
    const std::size_t n = ds.rows();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));

    for (int t = 1; t <= rounds; ++t) {
        LearnerSpec spec = base_spec;
        spec.seed = seed ^ static_cast<std::uint64_t>(t);
        Model model = trainer.fit(spec, w);
        const auto pred = trainer.predict(model);

        double error = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (pred[i] != ds.labels[i]) error += w[i];

        RoundTrace trace{t, error, 0.0, false, false, w};
        if (error >= max_error) {
            if (t == 1) {
                const double alpha = k > 2 ? std::log(static_cast<double>(k - 1)) : 1.0;
                ens.rounds.push_back({std::move(model), alpha, error});
                trace.alpha = alpha;
                trace.accepted = true;
            }
            trace.stopped = true;
            if (options.observer) options.observer(trace);
            break;
        }
        if (error <= kMinBoostError) {
            const double alpha = samme_alpha(kMinBoostError, k);
            ens.rounds.push_back({std::move(model), alpha, kMinBoostError});
            trace.error = kMinBoostError;
            trace.alpha = alpha;
            trace.accepted = true;
            trace.stopped = true;
            if (options.observer) options.observer(trace);
            break;
        }

        const double alpha = samme_alpha(error, k);
        const double boost = std::exp(alpha);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pred[i] != ds.labels[i]) w[i] *= boost;
            total += w[i];
        }
        for (double& v : w) v /= total;
        ens.rounds.push_back({std::move(model), alpha, error});

        trace.alpha = alpha;
        trace.accepted = true;
        trace.weights = w;
        if (options.observer) options.observer(trace);
    }
    return ens;
}

/// True when every round is a KNN model over the same stored rows with the
/// same k, so one neighbor search serves all rounds.
inline bool shares_knn_neighbors(const BoostedEnsemble& ens) {
    if (ens.rounds.empty()) return false;
    const auto* first = std::get_if<KnnModel>(&ens.rounds.front().model.impl);
    if (!first) return false;
    for (const auto& r : ens.rounds) {
        const auto* m = std::get_if<KnnModel>(&r.model.impl);
        if (!m || m->store != first->store || m->k != first->k) return false;
    }
    return true;
}

/// Per-class vote totals sum_t alpha_t [h_t(x) = c].
inline std::vector<double> boost_votes(const BoostedEnsemble& ens, std::span<const double> x) {
    if (x.size() != ens.dim)
        throw std::invalid_argument("boost_predict: expected " + std::to_string(ens.dim) + " features, got " +
                                    std::to_string(x.size()));
    std::vector<double> votes(static_cast<std::size_t>(ens.num_classes), 0.0);
    if (shares_knn_neighbors(ens)) {
        const auto& first = std::get<KnnModel>(ens.rounds.front().model.impl);
        const auto nb = knn_neighbors(first.store->rows, x, static_cast<std::size_t>(first.k));
        for (const auto& r : ens.rounds) {
            const auto& knn = std::get<KnnModel>(r.model.impl);
            votes[static_cast<std::size_t>(knn_vote(nb, first.store->labels, knn.weights, knn.num_classes))] += r.alpha;
        }
        return votes;
    }
    for (const auto& r : ens.rounds) votes[static_cast<std::size_t>(predict(r.model, x))] += r.alpha;
    return votes;
}

/// Class index with the largest alpha-weighted vote; lowest index on ties.
inline int boost_predict(const BoostedEnsemble& ens, std::span<const double> x) {
    return argmax_lowest(boost_votes(ens, x));
}

inline ActivityLabel boost_predict_label(const BoostedEnsemble& ens, std::span<const double> x) {
    return ActivityLabel::from_index(boost_predict(ens, x));
}

} // namespace hapt

#endif // HAPT_BOOSTING_HPP
