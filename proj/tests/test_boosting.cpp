#include "support.hpp"

#include <gtest/gtest.h>

using namespace hapt;
using namespace testing_support;

namespace {

/// Straight-line SAMME written from the update rule, used as the reference.
struct ReferenceRound {
    double error;
    double alpha;
};

std::vector<ReferenceRound> reference_samme(const LearnerSpec& base, const Dataset& ds, int rounds, std::uint64_t seed,
                                            std::vector<Model>& models) {
    const double k = ds.num_classes;
    std::vector<double> w(ds.rows(), 1.0 / static_cast<double>(ds.rows()));
    std::vector<ReferenceRound> out;
    for (int t = 1; t <= rounds; ++t) {
        auto spec = base;
        spec.seed = seed ^ static_cast<std::uint64_t>(t);
        auto m = fit(spec, ds, w);
        std::vector<bool> wrong(ds.rows());
        double err = 0.0;
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            wrong[i] = predict(m, ds.row(i)) != ds.labels[i];
            if (wrong[i]) err += w[i];
        }
        if (err >= 1.0 - 1.0 / k) {
            if (t == 1) {
                out.push_back({err, k > 2 ? std::log(k - 1.0) : 1.0});
                models.push_back(std::move(m));
            }
            break;
        }
        if (err <= 1e-10) {
            out.push_back({1e-10, std::log((1.0 - 1e-10) / 1e-10) + std::log(k - 1.0)});
            models.push_back(std::move(m));
            break;
        }
        const double alpha = std::log((1.0 - err) / err) + std::log(k - 1.0);
        double total = 0.0;
        for (std::size_t i = 0; i < ds.rows(); ++i) {
            if (wrong[i]) w[i] *= std::exp(alpha);
            total += w[i];
        }
        for (double& v : w) v /= total;
        out.push_back({err, alpha});
        models.push_back(std::move(m));
    }
    return out;
}

} // namespace

TEST(Samme, AlphaFormula) {
    EXPECT_NEAR(samme_alpha(0.5, 12), std::log(11.0), 1e-12);
    for (double e : {0.1, 0.25, 0.4, 0.49})
        EXPECT_NEAR(samme_alpha(e, 2), std::log((1.0 - e) / e), 1e-12); // classic AdaBoost
    EXPECT_GT(samme_alpha(0.9, 12), 0.0);                               // still better than chance for K = 12
}

TEST(Samme, MatchesReferenceLoop) {
    for (auto family : {Family::DecisionStump, Family::DecisionTree, Family::NaiveBayes, Family::Knn,
                        Family::RandomTree}) {
        const auto ds = blobs(15, 3, 5, 31, 1.4);
        auto spec = LearnerSpec::defaults(family);
        spec.max_depth = family == Family::DecisionStump ? 1 : 2;
        std::vector<Model> models;
        const auto ref = reference_samme(spec, ds, 8, 7, models);
        const auto ens = boost_fit(spec, ds, 8, 7);
        ASSERT_EQ(ens.rounds.size(), ref.size()) << family_key(family);
        for (std::size_t t = 0; t < ref.size(); ++t) {
            EXPECT_NEAR(ens.rounds[t].error, ref[t].error, 1e-12) << family_key(family) << " round " << t;
            EXPECT_NEAR(ens.rounds[t].alpha, ref[t].alpha, 1e-9) << family_key(family) << " round " << t;
        }
        for (const auto& q : queries(ds.features, 200, 5)) {
            std::vector<double> votes(static_cast<std::size_t>(ds.num_classes), 0.0);
            for (std::size_t t = 0; t < models.size(); ++t)
                votes[static_cast<std::size_t>(predict(models[t], q))] += ref[t].alpha;
            ASSERT_EQ(boost_predict(ens, q), oracle::first_max(votes)) << family_key(family);
        }
    }
}

TEST(Samme, WeightsStayNormalizedAndAlphasPositive) {
    for (auto family : {Family::DecisionStump, Family::Knn, Family::NaiveBayes, Family::Lda, Family::MultiwayTree,
                        Family::LinearRegressionOvr}) {
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            const auto ds = blobs(20, 3, 6, seed, 1.5, kNumActivities);
            int observed = 0;
            BoostOptions opts;
            opts.observer = [&](const RoundTrace& tr) {
                ++observed;
                double s = 0.0;
                for (double v : tr.weights) s += v;
                EXPECT_NEAR(s, 1.0, 1e-10) << family_key(family) << " round " << tr.round;
                if (tr.accepted) {
                    EXPECT_GT(tr.alpha, 0.0);
                }
            };
            const auto ens = boost_fit(LearnerSpec::defaults(family), ds, 10, seed, opts);
            EXPECT_GE(observed, 1);
            for (const auto& r : ens.rounds) EXPECT_GT(r.alpha, 0.0);
        }
    }
}

TEST(Samme, PerfectLearnerStopsAfterOneRound) {
    const auto ds = blobs(10, 2, 3, 4);
    auto spec = LearnerSpec::defaults(Family::Knn);
    spec.k = 1;
    const auto ens = boost_fit(spec, ds, 10, 1);
    ASSERT_EQ(ens.rounds.size(), 1u);
    EXPECT_DOUBLE_EQ(ens.rounds[0].error, kMinBoostError);
    EXPECT_NEAR(ens.rounds[0].alpha, samme_alpha(kMinBoostError, 3), 1e-12);
}

TEST(Samme, UselessFirstRoundIsKeptWithFallbackAlpha) {
    // One constant feature, two balanced classes: every learner errs on half.
    Dataset ds;
    ds.num_classes = 2;
    ds.feature_names = {"c"};
    ds.features = Matrix{{1}, {1}, {1}, {1}};
    ds.labels = {0, 1, 0, 1};
    const auto ens = boost_fit(LearnerSpec::defaults(Family::DecisionStump), ds, 5, 1);
    ASSERT_EQ(ens.rounds.size(), 1u);
    EXPECT_DOUBLE_EQ(ens.rounds[0].alpha, 1.0);
    const std::vector<double> q{1.0};
    EXPECT_EQ(boost_predict(ens, q), 0);
}

TEST(Samme, RoundSeedsDiffer) {
    const auto ds = blobs(20, 4, 3, 9, 2.0);
    std::vector<std::uint64_t> seeds;
    BoostOptions opts;
    const auto ens = boost_fit(LearnerSpec::defaults(Family::RandomTree), ds, 4, 100, opts);
    for (const auto& r : ens.rounds) seeds.push_back(r.model.spec.seed);
    for (std::size_t t = 0; t < seeds.size(); ++t) EXPECT_EQ(seeds[t], 100ULL ^ (t + 1));
}

TEST(Samme, ThreadCountDoesNotChangeTheEnsemble) {
    const auto ds = blobs(25, 3, 5, 12, 1.3);
    for (auto family : {Family::Knn, Family::DecisionTree}) {
        const auto a = boost_fit(LearnerSpec::defaults(family), ds, 6, 3, BoostOptions{1, {}});
        const auto b = boost_fit(LearnerSpec::defaults(family), ds, 6, 3, BoostOptions{4, {}});
        ASSERT_EQ(a.rounds.size(), b.rounds.size());
        for (std::size_t t = 0; t < a.rounds.size(); ++t) {
            EXPECT_EQ(a.rounds[t].alpha, b.rounds[t].alpha);
            EXPECT_EQ(a.rounds[t].error, b.rounds[t].error);
        }
    }
}

TEST(Samme, SharedNeighborPathEqualsPerRoundPrediction) {
    const auto ds = blobs(20, 3, 4, 6, 1.6);
    const auto ens = boost_fit(LearnerSpec::defaults(Family::Knn), ds, 10, 2);
    ASSERT_TRUE(shares_knn_neighbors(ens));
    for (const auto& q : queries(ds.features, 300, 8)) {
        std::vector<double> votes(4, 0.0);
        for (const auto& r : ens.rounds) votes[static_cast<std::size_t>(predict(r.model, q))] += r.alpha;
        ASSERT_EQ(boost_votes(ens, q), votes);
    }
}

TEST(Samme, RejectsBadArguments) {
    const auto ds = blobs(5, 2, 2, 1);
    EXPECT_THROW(boost_fit(LearnerSpec{}, ds, 0, 1), ConfigError);
    Dataset one_class = ds;
    std::fill(one_class.labels.begin(), one_class.labels.end(), 0);
    EXPECT_THROW(boost_fit(LearnerSpec{}, one_class, 3, 1), std::invalid_argument);
    const auto ens = boost_fit(LearnerSpec{}, ds, 2, 1);
    EXPECT_THROW(boost_predict(ens, std::vector<double>{1.0}), std::invalid_argument);
}
