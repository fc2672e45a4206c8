#ifndef HAPT_LEARNERS_TREE_HPP
#define HAPT_LEARNERS_TREE_HPP

#include <hapt/learners/common.hpp>
#include <hapt/learners/spec.hpp>
#include <hapt/random.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

namespace hapt {

/// Tree node. An internal node routes x to child i where i is the number of
/// thresholds strictly below x[feature] (so a binary node sends
/// x <= threshold left). Leaves have no children.
struct TreeNode {
    int feature = -1;
    std::vector<double> thresholds;
    std::vector<int> children;
    int label = 0;
    double mass = 0.0; // training weight reaching the node

    bool is_leaf() const { return children.empty(); }
};

struct TreeModel {
    std::vector<TreeNode> nodes; // nodes[0] is the root
    int num_classes = 0;

    int predict(std::span<const double> x) const {
        int id = 0;
        while (!nodes[static_cast<std::size_t>(id)].is_leaf()) {
            const auto& n = nodes[static_cast<std::size_t>(id)];
            const double v = x[static_cast<std::size_t>(n.feature)];
            const auto pos = std::lower_bound(n.thresholds.begin(), n.thresholds.end(), v) - n.thresholds.begin();
            id = n.children[static_cast<std::size_t>(pos)];
        }
        return nodes[static_cast<std::size_t>(id)].label;
    }

    double leaf_mass() const {
        double s = 0.0;
        for (const auto& n : nodes)
            if (n.is_leaf()) s += n.mass;
        return s;
    }

    int depth() const { return depth_from(0); }

private:
    int depth_from(int id) const {
        const auto& n = nodes[static_cast<std::size_t>(id)];
        int best = 0;
        for (int c : n.children) best = std::max(best, 1 + depth_from(c));
        return best;
    }
};

/// Depth-one tree in flat form. A single-leaf stump has feature -1 and
/// left_label == right_label.
struct StumpModel {
    int feature = -1;
    double threshold = std::numeric_limits<double>::infinity();
    int left_label = 0;
    int right_label = 0;

    int predict(std::span<const double> x) const {
        if (feature < 0) return left_label;
        return x[static_cast<std::size_t>(feature)] <= threshold ? left_label : right_label;
    }
};

struct ForestModel {
    std::vector<TreeModel> trees;
    int num_classes = 0;

    /// Unweighted majority over trees; lower class index on ties.
    int predict(std::span<const double> x) const {
        std::vector<double> votes(static_cast<std::size_t>(num_classes), 0.0);
        for (const auto& t : trees) votes[static_cast<std::size_t>(t.predict(x))] += 1.0;
        return argmax_lowest(votes);
    }
};

struct TreeOptions {
    int max_depth = 10;
    double min_leaf_weight = 1e-4; // fraction of the root's weight mass
    int bins = 0;                  // 0: binary splits; otherwise up to `bins` intervals
    int subset = 0;                // 0: all features; otherwise random subset per node
};

namespace detail {

inline constexpr int kMultiwayCandidates = 16;

// Midpoint of a < b that is guaranteed to satisfy a <= mid < b.
inline double split_point(double a, double b) {
    const double mid = a + (b - a) / 2.0;
    return mid < b ? mid : a;
}

/// Greedy top-down induction minimizing weighted Gini impurity.
///
/// Split quality is the sum over children of sum_c m_c^2 / M (larger is
/// purer). Candidates are compared with strict '>', so among equal scores
/// the first one found wins: lower feature index, then lower threshold,
/// then fewer boundaries.
class TreeBuilder {
public:
    TreeBuilder(const Matrix& x, std::span<const int> y, std::span<const double> w, int num_classes,
                TreeOptions opts, Rng* rng)
        : x_(x), y_(y), w_(w), k_(num_classes), opts_(opts), rng_(rng) {}

    TreeModel build(std::vector<std::size_t> rows) {
        double total = 0.0;
        for (auto r : rows) total += w_[r];
        min_leaf_ = opts_.min_leaf_weight * total;
        model_ = TreeModel{};
        model_.num_classes = k_;
        grow(std::move(rows), 0);
        return std::move(model_);
    }

private:
    struct Split {
        int feature = -1;
        std::vector<double> thresholds;
        double score = -std::numeric_limits<double>::infinity();
    };

    int grow(std::vector<std::size_t> rows, int depth) {
        std::vector<double> mass(static_cast<std::size_t>(k_), 0.0);
        double total = 0.0;
        for (auto r : rows) {
            mass[static_cast<std::size_t>(y_[r])] += w_[r];
            total += w_[r];
        }
        const int id = static_cast<int>(model_.nodes.size());
        model_.nodes.emplace_back();
        model_.nodes.back().label = argmax_lowest(mass);
        model_.nodes.back().mass = total;

        int populated = 0;
        for (double m : mass) populated += m > 0.0;
        if (depth >= opts_.max_depth || populated <= 1 || total < 2.0 * min_leaf_) return id;

        const Split best = find_split(rows, mass, total);
        if (best.feature < 0) return id;

        std::vector<std::vector<std::size_t>> parts(best.thresholds.size() + 1);
        for (auto r : rows) {
            const double v = x_(r, static_cast<std::size_t>(best.feature));
            const auto pos = std::lower_bound(best.thresholds.begin(), best.thresholds.end(), v) - best.thresholds.begin();
            parts[static_cast<std::size_t>(pos)].push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        std::vector<int> children;
        for (auto& p : parts) children.push_back(grow(std::move(p), depth + 1));
        auto& node = model_.nodes[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.thresholds = best.thresholds;
        node.children = std::move(children);
        return id;
    }

    std::vector<int> candidate_features() {
        const int d = static_cast<int>(x_.cols());
        std::vector<int> features(static_cast<std::size_t>(d));
        std::iota(features.begin(), features.end(), 0);
        if (opts_.subset <= 0 || opts_.subset >= d || rng_ == nullptr) return features;
        // Partial Fisher-Yates: the first `subset` slots are a uniform sample.
        for (int i = 0; i < opts_.subset; ++i) {
            const auto j = i + static_cast<int>(rng_->below(static_cast<std::uint64_t>(d - i)));
            std::swap(features[static_cast<std::size_t>(i)], features[static_cast<std::size_t>(j)]);
        }
        features.resize(static_cast<std::size_t>(opts_.subset));
        std::sort(features.begin(), features.end());
        return features;
    }

    Split find_split(const std::vector<std::size_t>& rows, const std::vector<double>& mass, double total) {
        Split best;
        std::vector<std::size_t> sorted = rows;
        for (int f : candidate_features()) {
            const auto col = static_cast<std::size_t>(f);
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                const double va = x_(a, col), vb = x_(b, col);
                return va < vb || (va == vb && a < b);
            });
            if (opts_.bins >= 2)
                multiway_split(sorted, f, mass, total, best);
            else
                binary_split(sorted, f, mass, total, best);
        }
        return best;
    }

    bool admissible(double m) const { return m > 0.0 && m >= min_leaf_; }

    void binary_split(const std::vector<std::size_t>& sorted, int f, const std::vector<double>& mass, double total,
                      Split& best) const {
        const auto col = static_cast<std::size_t>(f);
        std::vector<double> left(static_cast<std::size_t>(k_), 0.0);
        double left_total = 0.0;
        for (std::size_t p = 0; p + 1 < sorted.size(); ++p) {
            const auto r = sorted[p];
            left[static_cast<std::size_t>(y_[r])] += w_[r];
            left_total += w_[r];
            const double a = x_(r, col), b = x_(sorted[p + 1], col);
            if (a == b) continue;
            const double right_total = total - left_total;
            if (!admissible(left_total) || !admissible(right_total)) continue;
            double score = 0.0;
            for (std::size_t c = 0; c < left.size(); ++c) {
                const double rc = mass[c] - left[c];
                score += left[c] * left[c] / left_total + rc * rc / right_total;
            }
            if (score > best.score) {
                best.score = score;
                best.feature = f;
                best.thresholds = {split_point(a, b)};
            }
        }
    }

    /// Boundaries come from a grid of up to 16 weighted-quantile candidates
    /// (levels q/17, q = 1..16, each moved to the midpoint above its value);
    /// every subset of at most bins-1 boundaries is scored.
    void multiway_split(const std::vector<std::size_t>& sorted, int f, const std::vector<double>& mass, double total,
                        Split& best) const {
        const auto col = static_cast<std::size_t>(f);
        const std::size_t n = sorted.size();

        std::vector<double> grid;
        double cum = 0.0;
        std::size_t p = 0;
        for (int q = 1; q <= kMultiwayCandidates; ++q) {
            const double target = total * q / (kMultiwayCandidates + 1);
            while (p < n && cum + w_[sorted[p]] < target) cum += w_[sorted[p++]];
            if (p >= n) break;
            const double v = x_(sorted[p], col);
            std::size_t next = p;
            while (next < n && x_(sorted[next], col) == v) ++next;
            if (next >= n) break;
            const double t = split_point(v, x_(sorted[next], col));
            if (grid.empty() || grid.back() < t) grid.push_back(t);
        }
        if (grid.empty()) return;

        // prefix[j][c]: class-c mass of rows at or below grid[j-1].
        const std::size_t m = grid.size();
        const std::size_t kk = static_cast<std::size_t>(k_);
        std::vector<double> prefix((m + 2) * kk, 0.0);
        std::vector<double> prefix_total(m + 2, 0.0);
        {
            std::size_t bucket = 0;
            std::vector<double> run(kk, 0.0);
            double run_total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto r = sorted[i];
                while (bucket < m && x_(r, col) > grid[bucket]) {
                    ++bucket;
                    std::copy(run.begin(), run.end(), prefix.begin() + static_cast<std::ptrdiff_t>(bucket * kk));
                    prefix_total[bucket] = run_total;
                }
                run[static_cast<std::size_t>(y_[r])] += w_[r];
                run_total += w_[r];
            }
            while (bucket < m) {
                ++bucket;
                std::copy(run.begin(), run.end(), prefix.begin() + static_cast<std::ptrdiff_t>(bucket * kk));
                prefix_total[bucket] = run_total;
            }
            std::copy(mass.begin(), mass.end(), prefix.begin() + static_cast<std::ptrdiff_t>((m + 1) * kk));
            prefix_total[m + 1] = total;
        }

        // Interval between cut positions a < b (cut j means "after grid[j-1]";
        // 0 is the lower end and m+1 the upper end).
        auto interval_score = [&](std::size_t a, std::size_t b, bool& ok) {
            const double tot = prefix_total[b] - prefix_total[a];
            if (!admissible(tot)) {
                ok = false;
                return 0.0;
            }
            double s = 0.0;
            for (std::size_t c = 0; c < kk; ++c) {
                const double mc = prefix[b * kk + c] - prefix[a * kk + c];
                s += mc * mc / tot;
            }
            return s;
        };

        const std::size_t max_cuts = std::min<std::size_t>(static_cast<std::size_t>(opts_.bins - 1), m);
        std::vector<std::size_t> cuts;
        for (std::size_t size = 1; size <= max_cuts; ++size) {
            cuts.resize(size);
            std::iota(cuts.begin(), cuts.end(), 1);
            while (true) {
                bool ok = true;
                double score = 0.0;
                std::size_t prev = 0;
                for (std::size_t c : cuts) {
                    score += interval_score(prev, c, ok);
                    prev = c;
                }
                score += interval_score(prev, m + 1, ok);
                if (ok && score > best.score) {
                    best.score = score;
                    best.feature = f;
                    best.thresholds.clear();
                    for (std::size_t c : cuts) best.thresholds.push_back(grid[c - 1]);
                }
                // Next combination of `size` values from 1..m, lexicographic.
                std::size_t i = size;
                while (i > 0 && cuts[i - 1] == m - size + i) --i;
                if (i == 0) break;
                ++cuts[i - 1];
                for (std::size_t j = i; j < size; ++j) cuts[j] = cuts[j - 1] + 1;
            }
        }
    }

    const Matrix& x_;
    std::span<const int> y_;
    std::span<const double> w_;
    int k_;
    TreeOptions opts_;
    Rng* rng_;
    double min_leaf_ = 0.0;
    TreeModel model_;
};

inline std::vector<std::size_t> all_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

} // namespace detail

inline TreeModel fit_tree(const Dataset& ds, std::span<const double> w, const TreeOptions& opts, Rng* rng = nullptr) {
    check_fit_inputs(ds, w);
    detail::TreeBuilder builder(ds.features, ds.labels, w, ds.num_classes, opts, rng);
    return builder.build(detail::all_rows(ds.rows()));
}

inline StumpModel to_stump(const TreeModel& tree) {
    StumpModel s;
    const auto& root = tree.nodes.front();
    if (root.is_leaf()) {
        s.left_label = s.right_label = root.label;
        return s;
    }
    s.feature = root.feature;
    s.threshold = root.thresholds.front();
    s.left_label = tree.nodes[static_cast<std::size_t>(root.children[0])].label;
    s.right_label = tree.nodes[static_cast<std::size_t>(root.children[1])].label;
    return s;
}

inline TreeOptions tree_options(const LearnerSpec& spec, std::size_t d) {
    TreeOptions o;
    o.max_depth = spec.family == Family::DecisionStump ? 1 : spec.max_depth;
    o.min_leaf_weight = spec.min_leaf_weight;
    if (spec.family == Family::MultiwayTree) o.bins = spec.bins;
    if (spec.family == Family::RandomTree || spec.family == Family::RandomForest) o.subset = spec.subset_size(d);
    return o;
}

/// Random forest: each tree is grown on a weighted bootstrap resample
/// (N draws with probability proportional to w; multiplicities become the
/// tree's weights) with a random feature subset at every node. Tree r uses
/// Rng(mix_seed(seed, r)) for both the resample and the subsets.
inline ForestModel fit_forest(const Dataset& ds, std::span<const double> w, const LearnerSpec& spec) {
    check_fit_inputs(ds, w);
    const std::size_t n = ds.rows();
    std::vector<double> cum(n);
    double run = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cum[i] = (run += w[i]);
        if (w[i] > 0.0) last_positive = i;
    }

    ForestModel forest;
    forest.num_classes = ds.num_classes;
    const auto opts = tree_options(spec, ds.dim());
    std::vector<double> counts(n);
    for (int r = 0; r < spec.trees; ++r) {
        Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(r)));
        std::fill(counts.begin(), counts.end(), 0.0);
        for (std::size_t draw = 0; draw < n; ++draw) {
            const double u = rng.unit() * run;
            auto pos = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
            counts[std::min(pos, last_positive)] += 1.0;
        }
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i)
            if (counts[i] > 0.0) rows.push_back(i);
        detail::TreeBuilder builder(ds.features, ds.labels, counts, ds.num_classes, opts, &rng);
        forest.trees.push_back(builder.build(std::move(rows)));
    }
    return forest;
}

} // namespace hapt

#endif // HAPT_LEARNERS_TREE_HPP
