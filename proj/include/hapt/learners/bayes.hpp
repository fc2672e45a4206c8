#ifndef HAPT_LEARNERS_BAYES_HPP
#define HAPT_LEARNERS_BAYES_HPP

#include <hapt/learners/common.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace hapt {

/// Gaussian naive Bayes. means/variances are indexed [class][feature];
/// classes with zero prior never win.
struct NbModel {
    std::vector<double> priors;
    std::vector<std::vector<double>> means;
    std::vector<std::vector<double>> variances; // already floored

    std::vector<double> scores(std::span<const double> x) const {
        std::vector<double> s(priors.size(), kNegInf);
        for (std::size_t c = 0; c < priors.size(); ++c) {
            if (priors[c] <= 0.0) continue;
            double v = std::log(priors[c]);
            for (std::size_t f = 0; f < x.size(); ++f) v += gaussian_logpdf(x[f], means[c][f], variances[c][f]);
            s[c] = v;
        }
        return s;
    }

    int predict(std::span<const double> x) const { return argmax_lowest(scores(x)); }
};

inline NbModel fit_naive_bayes(const Dataset& ds, std::span<const double> w) {
    check_fit_inputs(ds, w);
    const auto k = static_cast<std::size_t>(ds.num_classes);
    const std::size_t d = ds.dim();
    const auto mass = class_masses(ds, w);
    double total = 0.0;
    for (double m : mass) total += m;

    NbModel m;
    m.priors.resize(k);
    m.means.assign(k, std::vector<double>(d, 0.0));
    m.variances.assign(k, std::vector<double>(d, kVarianceFloor));
    for (std::size_t c = 0; c < k; ++c) m.priors[c] = mass[c] / total;

    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const auto c = static_cast<std::size_t>(ds.labels[i]);
        for (std::size_t f = 0; f < d; ++f) m.means[c][f] += w[i] * ds.features(i, f);
    }
    std::vector<std::vector<double>> ss(k, std::vector<double>(d, 0.0));
    for (std::size_t c = 0; c < k; ++c)
        if (mass[c] > 0.0)
            for (double& v : m.means[c]) v /= mass[c];
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const auto c = static_cast<std::size_t>(ds.labels[i]);
        for (std::size_t f = 0; f < d; ++f) {
            const double t = ds.features(i, f) - m.means[c][f];
            ss[c][f] += w[i] * t * t;
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        if (mass[c] > 0.0)
            for (std::size_t f = 0; f < d; ++f) m.variances[c][f] = std::max(ss[c][f] / mass[c], kVarianceFloor);
    return m;
}

/// One feature's kernel density for one class: samples sorted by value.
struct KernelDensity {
    std::vector<double> values;
    std::vector<double> weights;
    double bandwidth = kBandwidthFloor;
    double total = 0.0;

    /// sum_j w_j N(x; x_j, h^2) / sum_j w_j. Kernels further than 40h from x
    /// are skipped: exp(-800) is exactly 0.0 in binary64, so the sum is the
    /// same as summing every term in value order.
    double density(double x) const {
        constexpr double kReach = 40.0;
        const auto lo = std::lower_bound(values.begin(), values.end(), x - kReach * bandwidth) - values.begin();
        const auto hi = std::upper_bound(values.begin(), values.end(), x + kReach * bandwidth) - values.begin();
        double s = 0.0;
        for (auto j = lo; j < hi; ++j) {
            const double z = (x - values[static_cast<std::size_t>(j)]) / bandwidth;
            s += weights[static_cast<std::size_t>(j)] * std::exp(-0.5 * z * z);
        }
        return s / (total * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    }
};

struct KdeNbModel {
    std::vector<double> priors;
    std::vector<std::vector<KernelDensity>> densities; // [class][feature]

    std::vector<double> scores(std::span<const double> x) const {
        std::vector<double> s(priors.size(), kNegInf);
        for (std::size_t c = 0; c < priors.size(); ++c) {
            if (priors[c] <= 0.0) continue;
            double v = std::log(priors[c]);
            for (std::size_t f = 0; f < x.size(); ++f)
                v += std::log(std::max(densities[c][f].density(x[f]), 1e-300));
            s[c] = v;
        }
        return s;
    }

    int predict(std::span<const double> x) const { return argmax_lowest(scores(x)); }
};

/// Kernel naive Bayes with Silverman bandwidth per class and feature. Rows
/// with zero weight are dropped from the sample lists.
inline KdeNbModel fit_kernel_naive_bayes(const Dataset& ds, std::span<const double> w) {
    check_fit_inputs(ds, w);
    const auto k = static_cast<std::size_t>(ds.num_classes);
    const std::size_t d = ds.dim();
    const auto mass = class_masses(ds, w);
    double total = 0.0;
    for (double m : mass) total += m;

    KdeNbModel m;
    m.priors.resize(k);
    m.densities.assign(k, std::vector<KernelDensity>(d));
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < ds.rows(); ++i)
        if (w[i] > 0.0) members[static_cast<std::size_t>(ds.labels[i])].push_back(i);

    std::vector<std::size_t> order;
    std::vector<double> xs, ws;
    for (std::size_t c = 0; c < k; ++c) {
        m.priors[c] = mass[c] / total;
        if (members[c].empty()) continue;
        for (std::size_t f = 0; f < d; ++f) {
            order = members[c];
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return ds.features(a, f) < ds.features(b, f); });
            auto& kd = m.densities[c][f];
            xs.clear();
            ws.clear();
            for (auto i : order) {
                xs.push_back(ds.features(i, f));
                ws.push_back(w[i]);
            }
            kd.bandwidth = silverman_bandwidth(xs, ws);
            kd.values = xs;
            kd.weights = ws;
            kd.total = 0.0;
            for (double v : ws) kd.total += v;
        }
    }
    return m;
}

} // namespace hapt

#endif // HAPT_LEARNERS_BAYES_HPP
