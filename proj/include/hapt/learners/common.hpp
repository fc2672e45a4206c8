#ifndef HAPT_LEARNERS_COMMON_HPP
#define HAPT_LEARNERS_COMMON_HPP

#include <hapt/dataset.hpp>
#include <hapt/numerics.hpp>

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace hapt {

/// Index of the largest score; the lowest index wins ties. -inf entries
/// only win if every entry is -inf.
inline int argmax_lowest(std::span<const double> scores) {
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c)
        if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    return best;
}

/// Weight mass per class.
inline std::vector<double> class_masses(const Dataset& ds, std::span<const double> w) {
    std::vector<double> m(static_cast<std::size_t>(ds.num_classes), 0.0);
    for (std::size_t i = 0; i < ds.rows(); ++i) m[static_cast<std::size_t>(ds.labels[i])] += w[i];
    return m;
}

/// Shared precondition check for every fit.
inline void check_fit_inputs(const Dataset& ds, std::span<const double> w) {
    if (ds.rows() == 0 || ds.dim() == 0) throw std::invalid_argument("fit: empty dataset");
    if (w.size() != ds.rows()) throw std::invalid_argument("fit: weight count does not match row count");
    WeightVector::check(w);
    for (int y : ds.labels)
        if (y < 0 || y >= ds.num_classes) throw std::invalid_argument("fit: label out of range");
}

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

} // namespace hapt

#endif // HAPT_LEARNERS_COMMON_HPP
