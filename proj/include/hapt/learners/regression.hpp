#ifndef HAPT_LEARNERS_REGRESSION_HPP
#define HAPT_LEARNERS_REGRESSION_HPP

#include <hapt/learners/common.hpp>

#include <optional>
#include <vector>

namespace hapt {

/// Linear scores [1, x] * coefficients; row 0 of coefficients is the
/// intercept.
struct LinRegModel {
    Matrix coefficients; // (d + 1) x K

    std::vector<double> scores(std::span<const double> x) const {
        std::vector<double> s(coefficients.cols(), 0.0);
        for (std::size_t c = 0; c < s.size(); ++c) {
            double v = coefficients(0, c);
            for (std::size_t f = 0; f < x.size(); ++f) v += x[f] * coefficients(f + 1, c);
            s[c] = v;
        }
        return s;
    }

    int predict(std::span<const double> x) const { return argmax_lowest(scores(x)); }
};

namespace detail {

struct NormalEquations {
    SymmetricMatrix gram; // X^T W X + ridge I
    Matrix rhs;           // X^T W Y
};

inline NormalEquations normal_equations(const Dataset& ds, std::span<const double> w, std::optional<double> ridge) {
    const std::size_t p = ds.dim() + 1;
    const auto k = static_cast<std::size_t>(ds.num_classes);
    Matrix gram(p, p);
    Matrix rhs(p, k);
    std::vector<double> z(p);
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (w[i] == 0.0) continue;
        z[0] = 1.0;
        for (std::size_t f = 0; f < ds.dim(); ++f) z[f + 1] = ds.features(i, f);
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b <= a; ++b) gram(a, b) += w[i] * z[a] * z[b];
            rhs(a, static_cast<std::size_t>(ds.labels[i])) += w[i] * z[a];
        }
    }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < a; ++b) gram(b, a) = gram(a, b);
    SymmetricMatrix g(std::move(gram));
    const double r = ridge ? *ridge : default_ridge(g);
    return {g.with_ridge(r), std::move(rhs)};
}

} // namespace detail

/// One-vs-rest: each class indicator column is solved on its own.
inline LinRegModel fit_linear_regression_ovr(const Dataset& ds, std::span<const double> w,
                                             std::optional<double> ridge) {
    check_fit_inputs(ds, w);
    const auto eq = detail::normal_equations(ds, w, ridge);
    const std::size_t p = eq.rhs.rows();
    LinRegModel m;
    m.coefficients = Matrix(p, eq.rhs.cols());
    Matrix column(p, 1);
    for (std::size_t c = 0; c < eq.rhs.cols(); ++c) {
        for (std::size_t r = 0; r < p; ++r) column(r, 0) = eq.rhs(r, c);
        const Matrix x = solve_spd(eq.gram, column);
        for (std::size_t r = 0; r < p; ++r) m.coefficients(r, c) = x(r, 0);
    }
    return m;
}

/// All indicator columns solved jointly with one factorization.
inline LinRegModel fit_vector_linear_regression(const Dataset& ds, std::span<const double> w,
                                                std::optional<double> ridge) {
    check_fit_inputs(ds, w);
    const auto eq = detail::normal_equations(ds, w, ridge);
    return LinRegModel{solve_spd(eq.gram, eq.rhs)};
}

} // namespace hapt

#endif // HAPT_LEARNERS_REGRESSION_HPP
