#ifndef HAPT_METRICS_HPP
#define HAPT_METRICS_HPP

#include <hapt/activity.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace hapt {

/// (tp + tn) / (tp + tn + fp + fn).
inline double accuracy_binary(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
    const std::uint64_t total = tp + tn + fp + fn;
    if (total == 0) throw std::invalid_argument("accuracy_binary: all counts are zero");
    return static_cast<double>(tp + tn) / static_cast<double>(total);
}

/// K x K counts, rows = predicted class, columns = true class, both by
/// class index (id - 1). Reports reorder to kReportOrder for display.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int num_classes)
        : k_(num_classes), counts_(static_cast<std::size_t>(num_classes * num_classes), 0) {}

    int num_classes() const { return k_; }

    void add(int predicted, int truth, std::uint64_t n = 1) { at(predicted, truth) += n; }

    std::uint64_t count(int predicted, int truth) const {
        check(predicted);
        check(truth);
        return counts_[index(predicted, truth)];
    }
    std::uint64_t& at(int predicted, int truth) {
        check(predicted);
        check(truth);
        return counts_[index(predicted, truth)];
    }

    std::uint64_t row_sum(int predicted) const {
        std::uint64_t s = 0;
        for (int t = 0; t < k_; ++t) s += count(predicted, t);
        return s;
    }
    std::uint64_t col_sum(int truth) const {
        std::uint64_t s = 0;
        for (int p = 0; p < k_; ++p) s += count(p, truth);
        return s;
    }
    std::uint64_t trace() const {
        std::uint64_t s = 0;
        for (int c = 0; c < k_; ++c) s += count(c, c);
        return s;
    }
    std::uint64_t total() const {
        std::uint64_t s = 0;
        for (auto v : counts_) s += v;
        return s;
    }

    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        if (o.k_ != k_) throw std::invalid_argument("ConfusionMatrix: class count mismatch");
        for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
        return *this;
    }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

private:
    std::size_t index(int p, int t) const { return static_cast<std::size_t>(p * k_ + t); }
    void check(int c) const {
        if (c < 0 || c >= k_) throw std::out_of_range("class index out of range: " + std::to_string(c));
    }

    int k_ = 0;
    std::vector<std::uint64_t> counts_;
};

/// Micro-averaged accuracy trace / total.
inline double overall_accuracy(const ConfusionMatrix& cm) {
    const auto total = cm.total();
    if (total == 0) throw std::invalid_argument("overall_accuracy: empty matrix");
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

/// counts[c][c] / row_sum(c); nullopt when nothing was predicted as c.
inline std::optional<double> class_precision(const ConfusionMatrix& cm, int c) {
    const auto row = cm.row_sum(c);
    if (row == 0) return std::nullopt;
    return static_cast<double>(cm.count(c, c)) / static_cast<double>(row);
}

/// counts[c][c] / col_sum(c); nullopt when class c never occurs.
inline std::optional<double> class_recall(const ConfusionMatrix& cm, int c) {
    const auto col = cm.col_sum(c);
    if (col == 0) return std::nullopt;
    return static_cast<double>(cm.count(c, c)) / static_cast<double>(col);
}

/// Display order for reports: kReportOrder when the matrix has the twelve
/// activities, otherwise plain index order.
inline std::vector<int> display_order(int num_classes) {
    std::vector<int> order;
    if (num_classes == kNumActivities) {
        for (int id : kReportOrder) order.push_back(id - 1);
    } else {
        for (int c = 0; c < num_classes; ++c) order.push_back(c);
    }
    return order;
}

} // namespace hapt

#endif // HAPT_METRICS_HPP
