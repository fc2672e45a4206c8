#ifndef HAPT_EVALUATION_HPP
#define HAPT_EVALUATION_HPP

#include <hapt/boosting.hpp>
#include <hapt/folds.hpp>
#include <hapt/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hapt {

struct CVResult {
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0; // sample standard deviation, divisor k - 1
    double micro_accuracy = 0.0;
    ConfusionMatrix aggregate;
    LearnerSpec spec;
    int folds = 0;
    int rounds = 0;
    std::uint64_t seed = 0;
    std::string fold_digest;
    std::vector<int> rounds_used; // boosting rounds kept, per fold
};

/// Something that predicts a class index for one feature row.
using RowPredictor = std::function<int(std::span<const double>)>;

/// Trains on a fold's complement; returns the predictor plus the number of
/// boosting rounds it kept (0 when not applicable).
using FoldTrainer = std::function<std::pair<RowPredictor, int>(const Dataset& train)>;

namespace detail {

inline double sample_std(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace detail

/// Cross-validation over a fixed fold assignment with an arbitrary trainer.
/// Each fold's result lands in its own slot, so the outcome does not depend
/// on how folds are scheduled across `threads`.
inline CVResult cross_validate_with(const Dataset& ds, const FoldAssignment& folds, const FoldTrainer& trainer,
                                    unsigned threads = 1) {
    if (folds.fold_of_row.size() != ds.rows()) throw std::invalid_argument("fold assignment does not match dataset");
    const auto k = static_cast<std::size_t>(folds.k);
    std::vector<ConfusionMatrix> per_fold(k, ConfusionMatrix(ds.num_classes));
    std::vector<int> rounds_used(k, 0);

    parallel_for(k, threads, [&](std::size_t f) {
        const auto fold = static_cast<int>(f);
        const auto train = ds.subset(folds.rows_not_in(fold));
        const auto [predictor, used] = trainer(train);
        rounds_used[f] = used;
        for (auto r : folds.rows_in(fold)) per_fold[f].add(predictor(ds.row(r)), ds.labels[r]);
    });

    CVResult out;
    out.folds = folds.k;
    out.seed = folds.seed;
    out.fold_digest = folds.digest();
    out.rounds_used = rounds_used;
    out.aggregate = ConfusionMatrix(ds.num_classes);
    for (const auto& cm : per_fold) {
        out.aggregate += cm;
        out.fold_accuracies.push_back(overall_accuracy(cm));
    }
    double sum = 0.0;
    for (double a : out.fold_accuracies) sum += a;
    out.mean_accuracy = sum / static_cast<double>(k);
    out.std_accuracy = detail::sample_std(out.fold_accuracies, out.mean_accuracy);
    out.micro_accuracy = overall_accuracy(out.aggregate);
    return out;
}

inline FoldTrainer boosted_trainer(const LearnerSpec& spec, int rounds, std::uint64_t seed) {
    return [spec, rounds, seed](const Dataset& train) -> std::pair<RowPredictor, int> {
        auto ens = std::make_shared<const BoostedEnsemble>(boost_fit(spec, train, rounds, seed));
        const int used = static_cast<int>(ens->rounds.size());
        return {[ens](std::span<const double> x) { return boost_predict(*ens, x); }, used};
    };
}

/// Stratified k-fold CV of the boosted learner: folds from
/// stratified_folds(ds, folds, seed), boosting with the same seed.
inline CVResult cross_validate(const LearnerSpec& spec, const Dataset& ds, int folds, int rounds, std::uint64_t seed,
                               unsigned threads = 1) {
    spec.validate(ds.dim());
    if (rounds < 1) throw ConfigError("rounds must be ≥ 1");
    const auto assignment = stratified_folds(ds, folds, seed);
    auto result = cross_validate_with(ds, assignment, boosted_trainer(spec, rounds, seed), threads);
    result.spec = spec;
    result.rounds = rounds;
    return result;
}

struct ComparisonRow {
    std::string learner;
    std::optional<CVResult> result; // empty for placeholder rows
    std::string note;
};

struct ComparisonReport {
    std::vector<ComparisonRow> rows;
    int folds = 0;
    int rounds = 0;
    std::uint64_t seed = 0;
    std::string fold_digest;
};

/// The twelve implemented families with default hyperparameters.
inline std::vector<LearnerSpec> default_specs() {
    std::vector<LearnerSpec> out;
    for (const auto& info : kFamilies) out.push_back(LearnerSpec::defaults(info.family));
    return out;
}

/// Runs cross_validate for every spec on one shared fold assignment. Rows
/// are sorted by descending micro accuracy (input order on ties). When all
/// twelve families are present, placeholder rows for the unimplemented
/// learners are appended.
inline ComparisonReport compare(const std::vector<LearnerSpec>& specs, const Dataset& ds, int folds, int rounds,
                                std::uint64_t seed, unsigned threads = 1) {
    if (specs.empty()) throw ConfigError("compare: no learners given");
    if (rounds < 1) throw ConfigError("rounds must be ≥ 1");
    for (const auto& s : specs) s.validate(ds.dim());
    const auto assignment = stratified_folds(ds, folds, seed);

    // Specs run one after another; folds within a spec use the thread pool.
    std::vector<CVResult> results;
    for (const auto& spec : specs) {
        auto r = cross_validate_with(ds, assignment, boosted_trainer(spec, rounds, seed), threads);
        r.spec = spec;
        r.rounds = rounds;
        results.push_back(std::move(r));
    }

    std::vector<std::size_t> order(specs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return results[a].micro_accuracy > results[b].micro_accuracy;
    });

    ComparisonReport report;
    report.folds = folds;
    report.rounds = rounds;
    report.seed = seed;
    report.fold_digest = assignment.digest();
    for (auto i : order)
        report.rows.push_back({std::string(family_display(specs[i].family)), std::move(results[i]), ""});

    bool all_families = true;
    for (const auto& info : kFamilies)
        all_families &= std::any_of(specs.begin(), specs.end(), [&](const LearnerSpec& s) { return s.family == info.family; });
    if (all_families)
        for (auto name : kUnimplementedLearners) report.rows.push_back({std::string(name), std::nullopt, "not implemented"});
    return report;
}

} // namespace hapt

#endif // HAPT_EVALUATION_HPP
