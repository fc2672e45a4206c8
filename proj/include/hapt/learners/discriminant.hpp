#ifndef HAPT_LEARNERS_DISCRIMINANT_HPP
#define HAPT_LEARNERS_DISCRIMINANT_HPP

#include <hapt/learners/common.hpp>

#include <cmath>
#include <optional>
#include <vector>

namespace hapt {

/// Linear discriminant: score_c(x) = x^T S^-1 mu_c - mu_c^T S^-1 mu_c / 2 + ln pi_c
/// with S the pooled within-class covariance.
struct LdaModel {
    std::vector<double> priors;
    Matrix means;                // K x d
    Matrix pooled_factor;        // Cholesky factor of the regularized pooled covariance
    Matrix coefficients;         // d x K, S^-1 mu_c
    std::vector<double> offsets; // -mu_c^T S^-1 mu_c / 2

    std::vector<double> scores(std::span<const double> x) const {
        std::vector<double> s(priors.size(), kNegInf);
        for (std::size_t c = 0; c < priors.size(); ++c) {
            if (priors[c] <= 0.0) continue;
            double v = offsets[c] + std::log(priors[c]);
            for (std::size_t f = 0; f < x.size(); ++f) v += x[f] * coefficients(f, c);
            s[c] = v;
        }
        return s;
    }

    int predict(std::span<const double> x) const { return argmax_lowest(scores(x)); }
};

/// Quadratic discriminant:
/// score_c(x) = -ln|S_c|/2 - (x - mu_c)^T S_c^-1 (x - mu_c)/2 + ln pi_c.
struct QdaModel {
    std::vector<double> priors;
    Matrix means;                // K x d
    std::vector<Cholesky> factors; // per class; empty for absent classes
    std::vector<double> log_dets;

    std::vector<double> scores(std::span<const double> x) const {
        std::vector<double> s(priors.size(), kNegInf);
        std::vector<double> diff(x.size());
        for (std::size_t c = 0; c < priors.size(); ++c) {
            if (priors[c] <= 0.0) continue;
            for (std::size_t f = 0; f < x.size(); ++f) diff[f] = x[f] - means(c, f);
            const double quad = factors[c].inverse_quadratic(diff);
            s[c] = -0.5 * log_dets[c] - 0.5 * quad + std::log(priors[c]);
        }
        return s;
    }

    int predict(std::span<const double> x) const { return argmax_lowest(scores(x)); }
};

namespace detail {

struct ClassMoments {
    std::vector<double> mass;
    double total = 0.0;
    Matrix means;                // K x d
    std::vector<Matrix> scatter; // per class, sum_i w_i (x_i - mu)(x_i - mu)^T
};

inline ClassMoments class_moments(const Dataset& ds, std::span<const double> w) {
    const auto k = static_cast<std::size_t>(ds.num_classes);
    const std::size_t d = ds.dim();
    ClassMoments cm;
    cm.mass = class_masses(ds, w);
    for (double m : cm.mass) cm.total += m;
    cm.means = Matrix(k, d);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const auto c = static_cast<std::size_t>(ds.labels[i]);
        for (std::size_t f = 0; f < d; ++f) cm.means(c, f) += w[i] * ds.features(i, f);
    }
    for (std::size_t c = 0; c < k; ++c)
        if (cm.mass[c] > 0.0)
            for (std::size_t f = 0; f < d; ++f) cm.means(c, f) /= cm.mass[c];
    cm.scatter.assign(k, Matrix(d, d));
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (w[i] == 0.0) continue;
        const auto c = static_cast<std::size_t>(ds.labels[i]);
        for (std::size_t f = 0; f < d; ++f) diff[f] = ds.features(i, f) - cm.means(c, f);
        auto& s = cm.scatter[c];
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b <= a; ++b) s(a, b) += w[i] * diff[a] * diff[b];
    }
    for (auto& s : cm.scatter)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < a; ++b) s(b, a) = s(a, b);
    return cm;
}

/// Diagonal floored at kVarianceFloor, then ridge added (explicit or
/// 1e-6 * trace / d).
inline SymmetricMatrix regularize(const Matrix& cov, std::optional<double> ridge) {
    const SymmetricMatrix floored = SymmetricMatrix(cov).with_diagonal_floor(kVarianceFloor);
    return floored.with_ridge(ridge ? *ridge : default_ridge(floored));
}

inline Matrix pooled_covariance(const ClassMoments& cm, std::size_t d) {
    Matrix pooled(d, d);
    for (const auto& s : cm.scatter)
        for (std::size_t i = 0; i < d * d; ++i) pooled.data()[i] += s.data()[i];
    for (double& v : pooled.data()) v /= cm.total;
    return pooled;
}

} // namespace detail

inline LdaModel fit_lda(const Dataset& ds, std::span<const double> w, std::optional<double> ridge) {
    check_fit_inputs(ds, w);
    const auto k = static_cast<std::size_t>(ds.num_classes);
    const std::size_t d = ds.dim();
    const auto cm = detail::class_moments(ds, w);

    LdaModel m;
    m.priors.resize(k);
    for (std::size_t c = 0; c < k; ++c) m.priors[c] = cm.mass[c] / cm.total;
    m.means = cm.means;
    const Cholesky chol(detail::regularize(detail::pooled_covariance(cm, d), ridge));
    m.pooled_factor = chol.factor();

    Matrix mu_t(d, k);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t f = 0; f < d; ++f) mu_t(f, c) = cm.means(c, f);
    m.coefficients = chol.solve(mu_t);
    m.offsets.assign(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
        double q = 0.0;
        for (std::size_t f = 0; f < d; ++f) q += cm.means(c, f) * m.coefficients(f, c);
        m.offsets[c] = -0.5 * q;
    }
    return m;
}

/// Classes whose weight mass is below 1e-8 of the total use the pooled
/// covariance instead of their own.
inline QdaModel fit_qda(const Dataset& ds, std::span<const double> w, std::optional<double> ridge) {
    check_fit_inputs(ds, w);
    const auto k = static_cast<std::size_t>(ds.num_classes);
    const std::size_t d = ds.dim();
    const auto cm = detail::class_moments(ds, w);

    QdaModel m;
    m.priors.resize(k);
    m.means = cm.means;
    m.factors.assign(k, Cholesky());
    m.log_dets.assign(k, 0.0);
    std::optional<Cholesky> pooled;
    for (std::size_t c = 0; c < k; ++c) {
        m.priors[c] = cm.mass[c] / cm.total;
        if (cm.mass[c] <= 0.0) continue;
        Cholesky chol;
        if (cm.mass[c] < 1e-8 * cm.total) {
            if (!pooled) pooled.emplace(detail::regularize(detail::pooled_covariance(cm, d), ridge));
            chol = *pooled;
        } else {
            Matrix cov = cm.scatter[c];
            for (double& v : cov.data()) v /= cm.mass[c];
            chol = Cholesky(detail::regularize(cov, ridge));
        }
        m.log_dets[c] = chol.log_det();
        m.factors[c] = std::move(chol);
    }
    return m;
}

} // namespace hapt

#endif // HAPT_LEARNERS_DISCRIMINANT_HPP
