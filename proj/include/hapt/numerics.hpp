#ifndef HAPT_NUMERICS_HPP
#define HAPT_NUMERICS_HPP

#include <hapt/error.hpp>
#include <hapt/matrix.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hapt {

inline constexpr double kVarianceFloor = 1e-9;
inline constexpr double kBandwidthFloor = 1e-3;
inline constexpr double kRidgeScale = 1e-6;

/// Non-negative sample weights with positive total.
class WeightVector {
public:
    WeightVector() = default;
    explicit WeightVector(std::vector<double> w) : w_(std::move(w)) { check(w_); }

    static WeightVector uniform(std::size_t n) {
        if (n == 0) throw std::invalid_argument("uniform weights over zero rows");
        return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    }

    static void check(std::span<const double> w) {
        double total = 0.0;
        for (double v : w) {
            if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("weights must be finite and >= 0");
            total += v;
        }
        if (!(total > 0.0)) throw std::invalid_argument("zero total weight");
    }

    void normalize() {
        const double s = sum();
        for (double& v : w_) v /= s;
    }

    double sum() const {
        double s = 0.0;
        for (double v : w_) s += v;
        return s;
    }

    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    double& operator[](std::size_t i) { return w_[i]; }
    std::span<const double> view() const { return w_; }
    operator std::span<const double>() const { return w_; }
    const std::vector<double>& values() const { return w_; }

private:
    std::vector<double> w_;
};

/// Square matrix checked for symmetry on construction.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols()) throw std::invalid_argument("SymmetricMatrix: not square");
        for (std::size_t i = 0; i < m_.rows(); ++i)
            for (std::size_t j = 0; j < i; ++j) {
                const double a = m_(i, j), b = m_(j, i);
                if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
                    throw std::invalid_argument("SymmetricMatrix: asymmetric at (" + std::to_string(i) + "," +
                                                std::to_string(j) + ")");
            }
    }

    std::size_t dim() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const Matrix& matrix() const { return m_; }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) t += m_(i, i);
        return t;
    }

    /// Adds r to every diagonal entry.
    SymmetricMatrix with_ridge(double r) const {
        Matrix m = m_;
        for (std::size_t i = 0; i < dim(); ++i) m(i, i) += r;
        return SymmetricMatrix(std::move(m));
    }

    /// Raises diagonal entries below `floor` to `floor`.
    SymmetricMatrix with_diagonal_floor(double floor) const {
        Matrix m = m_;
        for (std::size_t i = 0; i < dim(); ++i) m(i, i) = std::max(m(i, i), floor);
        return SymmetricMatrix(std::move(m));
    }

private:
    Matrix m_;
};

/// sum_i w_i x_i / sum_i w_i.
inline std::vector<double> weighted_mean(const Matrix& xs, std::span<const double> w) {
    if (xs.rows() != w.size()) throw std::invalid_argument("weighted_mean: dimension mismatch");
    double total = 0.0;
    for (double v : w) total += v;
    if (!(total > 0.0)) throw std::invalid_argument("weighted_mean: zero total weight");
    std::vector<double> mu(xs.cols(), 0.0);
    for (std::size_t i = 0; i < xs.rows(); ++i) {
        if (w[i] == 0.0) continue;
        const auto r = xs.row(i);
        for (std::size_t j = 0; j < mu.size(); ++j) mu[j] += w[i] * r[j];
    }
    for (double& v : mu) v /= total;
    return mu;
}

/// sum_i w_i (x_i - mu)(x_i - mu)^T / sum_i w_i + ridge * I.
inline SymmetricMatrix weighted_covariance(const Matrix& xs, std::span<const double> w, double ridge = 0.0) {
    if (ridge < 0.0) throw std::invalid_argument("weighted_covariance: negative ridge");
    const auto mu = weighted_mean(xs, w);
    double total = 0.0;
    for (double v : w) total += v;
    const std::size_t d = xs.cols();
    Matrix cov(d, d);
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < xs.rows(); ++i) {
        if (w[i] == 0.0) continue;
        const auto r = xs.row(i);
        for (std::size_t j = 0; j < d; ++j) diff[j] = r[j] - mu[j];
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b <= a; ++b) cov(a, b) += w[i] * diff[a] * diff[b];
    }
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            cov(a, b) /= total;
            cov(b, a) = cov(a, b);
        }
        cov(a, a) += ridge;
    }
    return SymmetricMatrix(std::move(cov));
}

/// Default scale-aware ridge: 1e-6 * trace(A) / dim.
inline double default_ridge(const SymmetricMatrix& a) {
    return a.dim() ? kRidgeScale * a.trace() / static_cast<double>(a.dim()) : 0.0;
}

/// Lower-triangular Cholesky factor L with A = L L^T.
class Cholesky {
public:
    Cholesky() = default;

    explicit Cholesky(const SymmetricMatrix& a) : l_(a.dim(), a.dim()) {
        const std::size_t n = a.dim();
        for (std::size_t j = 0; j < n; ++j) {
            double diag = a(j, j);
            for (std::size_t k = 0; k < j; ++k) diag -= l_(j, k) * l_(j, k);
            if (!(diag > 0.0) || !std::isfinite(diag))
                throw NumericError("singular after ridge: non-positive pivot at index " + std::to_string(j));
            const double ljj = std::sqrt(diag);
            l_(j, j) = ljj;
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = a(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
                l_(i, j) = s / ljj;
            }
        }
    }

    /// Rebuilds from a stored factor (deserialization).
    static Cholesky from_factor(Matrix l) {
        Cholesky c;
        c.l_ = std::move(l);
        return c;
    }

    std::size_t dim() const { return l_.rows(); }
    const Matrix& factor() const { return l_; }

    double log_det() const {
        double s = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) s += std::log(l_(i, i));
        return 2.0 * s;
    }

    /// Solves L y = b in place.
    void forward(std::span<double> b) const {
        for (std::size_t i = 0; i < dim(); ++i) {
            double s = b[i];
            for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * b[k];
            b[i] = s / l_(i, i);
        }
    }

    /// Solves L^T x = y in place.
    void backward(std::span<double> y) const {
        for (std::size_t ii = dim(); ii-- > 0;) {
            double s = y[ii];
            for (std::size_t k = ii + 1; k < dim(); ++k) s -= l_(k, ii) * y[k];
            y[ii] = s / l_(ii, ii);
        }
    }

    Matrix solve(const Matrix& b) const {
        if (b.rows() != dim()) throw std::invalid_argument("Cholesky::solve: dimension mismatch");
        Matrix x(b.rows(), b.cols());
        std::vector<double> col(dim());
        for (std::size_t c = 0; c < b.cols(); ++c) {
            for (std::size_t r = 0; r < dim(); ++r) col[r] = b(r, c);
            forward(col);
            backward(col);
            for (std::size_t r = 0; r < dim(); ++r) x(r, c) = col[r];
        }
        return x;
    }

    /// v^T A^{-1} v.
    double inverse_quadratic(std::span<const double> v) const {
        std::vector<double> y(v.begin(), v.end());
        forward(y);
        double s = 0.0;
        for (double t : y) s += t * t;
        return s;
    }

private:
    Matrix l_;
};

/// Solves A X = B for symmetric positive definite A.
inline Matrix solve_spd(const SymmetricMatrix& a, const Matrix& b) { return Cholesky(a).solve(b); }

/// log N(x; mean, var), with var floored at kVarianceFloor.
inline double gaussian_logpdf(double x, double mean, double var) {
    var = std::max(var, kVarianceFloor);
    const double z = x - mean;
    return -0.5 * (std::log(2.0 * std::numbers::pi * var) + z * z / var);
}

/// Silverman's rule h = 1.06 * sigma_w * n_eff^(-1/5) with
/// n_eff = (sum w)^2 / sum w^2, floored at kBandwidthFloor.
inline double silverman_bandwidth(std::span<const double> xs, std::span<const double> w) {
    if (xs.size() != w.size()) throw std::invalid_argument("silverman_bandwidth: dimension mismatch");
    double total = 0.0, total_sq = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        total += w[i];
        total_sq += w[i] * w[i];
        mean += w[i] * xs[i];
    }
    if (!(total > 0.0)) throw std::invalid_argument("silverman_bandwidth: zero total weight");
    mean /= total;
    double var = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) var += w[i] * (xs[i] - mean) * (xs[i] - mean);
    var /= total;
    const double n_eff = total * total / total_sq;
    const double h = 1.06 * std::sqrt(var) * std::pow(n_eff, -0.2);
    return std::max(h, kBandwidthFloor);
}

} // namespace hapt

#endif // HAPT_NUMERICS_HPP
