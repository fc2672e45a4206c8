#ifndef HAPT_FOLDS_HPP
#define HAPT_FOLDS_HPP

#include <hapt/dataset.hpp>
#include <hapt/digest.hpp>
#include <hapt/error.hpp>
#include <hapt/random.hpp>

#include <cstdint>
#include <vector>

namespace hapt {

struct FoldAssignment {
    std::vector<int> fold_of_row;
    int k = 0;
    std::uint64_t seed = 0;

    std::vector<std::size_t> rows_in(int fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < fold_of_row.size(); ++i)
            if (fold_of_row[i] == fold) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> rows_not_in(int fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < fold_of_row.size(); ++i)
            if (fold_of_row[i] != fold) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> s(static_cast<std::size_t>(k), 0);
        for (int f : fold_of_row) ++s[static_cast<std::size_t>(f)];
        return s;
    }

    std::string digest() const {
        Fnv1a h;
        h.u64(static_cast<std::uint64_t>(k));
        for (int f : fold_of_row) h.u64(static_cast<std::uint64_t>(f));
        return h.hex();
    }
};

/// Stratified k-fold assignment.
///
/// Row indices of each class (classes in index order) are shuffled with
/// Rng(seed) and appended to one running sequence; the row at position p of
/// that sequence goes to fold p mod k. Each class occupies a contiguous run
/// of positions, so per-class fold counts differ by at most one, and so do
/// the global fold sizes.
inline FoldAssignment stratified_folds(const Dataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("folds must be ≥ 2");
    if (static_cast<std::size_t>(k) > ds.rows())
        throw ConfigError("folds (" + std::to_string(k) + ") exceed row count (" + std::to_string(ds.rows()) + ")");

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(ds.num_classes));
    for (std::size_t r = 0; r < ds.rows(); ++r) by_class[static_cast<std::size_t>(ds.labels[r])].push_back(r);

    FoldAssignment out;
    out.k = k;
    out.seed = seed;
    out.fold_of_row.assign(ds.rows(), -1);
    Rng rng(seed);
    std::size_t position = 0;
    for (auto& rows : by_class) {
        rng.shuffle(std::span<std::size_t>(rows));
        for (auto r : rows) out.fold_of_row[r] = static_cast<int>(position++ % static_cast<std::size_t>(k));
    }
    return out;
}

} // namespace hapt

#endif // HAPT_FOLDS_HPP
