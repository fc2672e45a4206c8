#ifndef HAPT_SUMMARY_HPP
#define HAPT_SUMMARY_HPP

#include <hapt/dataset.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hapt {

struct FeatureSummary {
    int activity = 0; // class index
    std::size_t feature = 0;
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0; // population (divisor n)
    double median_abs_dev = 0.0;
    double max = 0.0;
    double min = 0.0;
};

namespace detail {

// Sorts in place; average of the two middle elements for even sizes.
inline double median_of(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

/// Per-activity statistics of every feature, ordered by class index then
/// feature index. Only activities present in the data get rows.
inline std::vector<FeatureSummary> summarize_by_activity(const Dataset& ds) {
    if (ds.rows() == 0) throw std::invalid_argument("summarize_by_activity: empty dataset");
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(ds.num_classes));
    for (std::size_t r = 0; r < ds.rows(); ++r) members[static_cast<std::size_t>(ds.labels[r])].push_back(r);

    std::vector<FeatureSummary> out;
    std::vector<double> values;
    for (int c = 0; c < ds.num_classes; ++c) {
        const auto& rows = members[static_cast<std::size_t>(c)];
        if (rows.empty()) continue;
        for (std::size_t f = 0; f < ds.dim(); ++f) {
            values.clear();
            for (auto r : rows) values.push_back(ds.features(r, f));
            const double n = static_cast<double>(values.size());

            FeatureSummary s;
            s.activity = c;
            s.feature = f;
            s.count = values.size();
            double sum = 0.0;
            for (double v : values) sum += v;
            s.mean = sum / n;
            double ss = 0.0;
            for (double v : values) ss += (v - s.mean) * (v - s.mean);
            s.std_dev = std::sqrt(ss / n);
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            s.min = *lo;
            s.max = *hi;
            const double med = detail::median_of(values);
            for (double& v : values) v = std::abs(v - med);
            s.median_abs_dev = detail::median_of(values);
            out.push_back(s);
        }
    }
    return out;
}

} // namespace hapt

#endif // HAPT_SUMMARY_HPP
