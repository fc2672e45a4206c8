#include "reference_matrix.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace hapt;
using namespace testing_support;

namespace {

/// Labels-only dataset with the HAPT Train class counts (7767 rows).
Dataset hapt_shaped_labels() {
    const std::array<std::size_t, 12> counts = {1226, 1073, 987, 1293, 1423, 1413, 47, 23, 75, 60, 90, 57};
    Dataset ds;
    ds.num_classes = kNumActivities;
    ds.feature_names = {"x"};
    ds.features = Matrix(0, 1);
    for (int c = 0; c < kNumActivities; ++c)
        for (std::size_t i = 0; i < counts[static_cast<std::size_t>(c)]; ++i) {
            ds.features.append_row(std::vector<double>{static_cast<double>(i)});
            ds.labels.push_back(c);
        }
    return ds;
}

FoldTrainer constant_trainer(int label) {
    return [label](const Dataset&) { return std::pair<RowPredictor, int>{[label](std::span<const double>) { return label; }, 0}; };
}

RunConfig config_for(const std::string& command, const LearnerSpec& spec, OutputFormat format) {
    RunConfig cfg;
    cfg.command = command;
    cfg.data_source = "csv:synthetic";
    cfg.spec = spec;
    cfg.folds = 4;
    cfg.rounds = 3;
    cfg.seed = 11;
    cfg.format = format;
    return cfg;
}

} // namespace

// ---------------------------------------------------------------- metrics

TEST(Metrics, HandComputedMatrix) {
    ConfusionMatrix cm(3);
    cm.add(0, 0, 5);
    cm.add(0, 1, 2);
    cm.add(1, 1, 3);
    cm.add(2, 0, 1);
    EXPECT_EQ(cm.total(), 11u);
    EXPECT_EQ(cm.trace(), 8u);
    EXPECT_DOUBLE_EQ(overall_accuracy(cm), 8.0 / 11.0);
    EXPECT_DOUBLE_EQ(*class_precision(cm, 0), 5.0 / 7.0);
    EXPECT_DOUBLE_EQ(*class_recall(cm, 0), 5.0 / 6.0);
    EXPECT_DOUBLE_EQ(*class_recall(cm, 1), 3.0 / 5.0);
    EXPECT_DOUBLE_EQ(*class_precision(cm, 2), 0.0);
    EXPECT_FALSE(class_recall(cm, 2).has_value()); // class 2 never occurs
    ConfusionMatrix other(3);
    other.add(2, 2);
    cm += other;
    EXPECT_EQ(cm.count(2, 2), 1u);
    EXPECT_THROW(overall_accuracy(ConfusionMatrix(2)), std::invalid_argument);
    EXPECT_THROW(cm.add(3, 0), std::out_of_range);
}

TEST(ReferenceMatrix, CountsAndMetricsFollowFromTheDefinitions) {
    const auto cm = reference::matrix();
    EXPECT_EQ(cm.total(), 7776u);
    EXPECT_EQ(cm.trace(), 6419u);
    const int standing = 4;
    EXPECT_EQ(cm.col_sum(standing), 1423u);
    EXPECT_DOUBLE_EQ(*class_precision(cm, standing), 1171.0 / 1620.0);
    EXPECT_DOUBLE_EQ(*class_recall(cm, standing), 1171.0 / 1423.0);
}

TEST(ReferenceMatrix, PrintedFiguresDisagreeExactlyWhereTheCountsDo) {
    // The printed counts do not reproduce six of the printed percentages;
    // every other figure matches to the printing precision.
    std::set<std::string> failing;
    for (const auto& c : reference::checks())
        if (!c.ok) failing.insert(c.what);
    EXPECT_EQ(failing, (std::set<std::string>{"overall accuracy", "precision SIT_TO_LIE", "precision WALKING",
                                              "precision WALKING_UPSTAIRS", "recall SIT_TO_LIE",
                                              "recall WALKING_DOWNSTAIRS"}));
    EXPECT_NEAR(100.0 * overall_accuracy(reference::matrix()), 82.549, 1e-3);
}

// ---------------------------------------------------------------- folds

TEST(Folds, StratifiedSizesAndCoverage) {
    const auto ds = hapt_shaped_labels();
    ASSERT_EQ(ds.rows(), 7767u);
    const auto f = stratified_folds(ds, 10, 42);
    auto sizes = f.sizes();
    std::sort(sizes.begin(), sizes.end());
    EXPECT_EQ(sizes, (std::vector<std::size_t>{776, 776, 776, 777, 777, 777, 777, 777, 777, 777}));
    for (int c = 0; c < kNumActivities; ++c) {
        std::vector<std::size_t> per(10, 0);
        for (std::size_t r = 0; r < ds.rows(); ++r)
            if (ds.labels[r] == c) ++per[static_cast<std::size_t>(f.fold_of_row[r])];
        EXPECT_LE(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()), 1u);
    }
    for (int fold = 0; fold < 10; ++fold) EXPECT_EQ(f.rows_in(fold).size() + f.rows_not_in(fold).size(), ds.rows());
}

TEST(Folds, SeedDeterminesAssignment) {
    const auto ds = hapt_shaped_labels();
    EXPECT_EQ(stratified_folds(ds, 10, 42).fold_of_row, stratified_folds(ds, 10, 42).fold_of_row);
    EXPECT_NE(stratified_folds(ds, 10, 42).digest(), stratified_folds(ds, 10, 43).digest());
    EXPECT_THROW(stratified_folds(ds, 1, 42), ConfigError);
    EXPECT_THROW(stratified_folds(blobs(1, 1, 2, 1), 3, 42), ConfigError);
}

// ---------------------------------------------------------------- cross-validation

TEST(CrossValidation, ConstantPredictorGivesTheClassShare) {
    const auto ds = hapt_shaped_labels();
    const int standing = 4;
    const auto r = cross_validate_with(ds, stratified_folds(ds, 10, 42), constant_trainer(standing), 3);
    EXPECT_EQ(r.aggregate.total(), 7767u);
    EXPECT_EQ(r.aggregate.trace(), 1423u);
    EXPECT_DOUBLE_EQ(r.micro_accuracy, 1423.0 / 7767.0);
    EXPECT_EQ(percent(r.micro_accuracy), "18.32%");
}

TEST(CrossValidation, AggregatesFoldsAndSampleStd) {
    const auto ds = blobs(20, 2, 3, 5, 1.5);
    const auto r = cross_validate(LearnerSpec::defaults(Family::Knn), ds, 5, 3, 9);
    ASSERT_EQ(r.fold_accuracies.size(), 5u);
    EXPECT_EQ(r.aggregate.total(), ds.rows());
    double mean = 0.0;
    for (double a : r.fold_accuracies) mean += a / 5.0;
    double ss = 0.0;
    for (double a : r.fold_accuracies) ss += (a - mean) * (a - mean);
    EXPECT_NEAR(r.mean_accuracy, mean, 1e-15);
    EXPECT_NEAR(r.std_accuracy, std::sqrt(ss / 4.0), 1e-15);
    EXPECT_DOUBLE_EQ(r.micro_accuracy, overall_accuracy(r.aggregate));
    for (int u : r.rounds_used) {
        EXPECT_GE(u, 1);
        EXPECT_LE(u, 3);
    }
}

TEST(CrossValidation, FoldModelsNeverSeeTheirTestRows) {
    const auto ds = blobs(10, 2, 2, 3);
    const auto folds = stratified_folds(ds, 4, 1);
    std::set<std::size_t> train_sizes;
    const auto r = cross_validate_with(
        ds, folds,
        [&](const Dataset& train) {
            train_sizes.insert(train.rows());
            return std::pair<RowPredictor, int>{[](std::span<const double>) { return 0; }, 1};
        },
        1);
    for (auto s : train_sizes) EXPECT_TRUE(s == 15u || s == 14u);
    EXPECT_EQ(r.aggregate.total(), ds.rows());
}

TEST(CrossValidation, ThreadCountDoesNotChangeResults) {
    const auto ds = blobs(15, 3, 4, 8, 1.5);
    for (auto family : {Family::Knn, Family::RandomForest, Family::Qda}) {
        const auto a = cross_validate(LearnerSpec::defaults(family), ds, 5, 4, 3, 1);
        const auto b = cross_validate(LearnerSpec::defaults(family), ds, 5, 4, 3, 6);
        EXPECT_EQ(a.fold_accuracies, b.fold_accuracies);
        EXPECT_EQ(cv_to_json(a).dump(), cv_to_json(b).dump());
    }
}

TEST(CrossValidation, RejectsBadConfiguration) {
    const auto ds = blobs(5, 2, 2, 1);
    EXPECT_THROW(cross_validate(LearnerSpec{}, ds, 3, 0, 1), ConfigError);
    EXPECT_THROW(cross_validate(LearnerSpec{}, ds, 1, 2, 1), ConfigError);
    auto bad = LearnerSpec::defaults(Family::Knn);
    bad.k = 0;
    EXPECT_THROW(cross_validate(bad, ds, 3, 2, 1), ConfigError);
}

// ---------------------------------------------------------------- comparison

TEST(Compare, SortedByAccuracyWithPlaceholdersForFullRuns) {
    const auto ds = blobs(12, 2, 3, 4, 1.2);
    const auto rep = compare(default_specs(), ds, 3, 2, 5, 4);
    std::size_t implemented = 0;
    double prev = 2.0;
    bool seen_placeholder = false;
    for (const auto& row : rep.rows) {
        if (row.result) {
            EXPECT_FALSE(seen_placeholder) << "placeholders come last";
            EXPECT_LE(row.result->micro_accuracy, prev);
            prev = row.result->micro_accuracy;
            EXPECT_EQ(row.result->fold_digest, rep.fold_digest);
            ++implemented;
        } else {
            seen_placeholder = true;
            EXPECT_EQ(row.note, "not implemented");
        }
    }
    EXPECT_EQ(implemented, 12u);
    EXPECT_GT(rep.rows.size(), 12u);

    const auto single = compare({LearnerSpec::defaults(Family::Knn)}, ds, 3, 2, 5);
    ASSERT_EQ(single.rows.size(), 1u);
    EXPECT_EQ(single.rows[0].learner, "k-NN");
    EXPECT_EQ(single.rows[0].result->micro_accuracy, cross_validate(LearnerSpec::defaults(Family::Knn), ds, 3, 2, 5).micro_accuracy);
}

// ---------------------------------------------------------------- reports

TEST(Reports, HeadlineFormat) {
    CVResult r;
    r.mean_accuracy = 0.82634;
    r.std_accuracy = 0.0152;
    r.micro_accuracy = 0.8263;
    EXPECT_EQ(headline(r), "accuracy: 82.63% +/- 1.52% (micro average: 82.63%)");
}

TEST(Reports, JsonCarriesConfigMatrixAndUndefinedMetricsAsNull) {
    const auto ds = blobs(10, 2, 3, 2, 1.0, kNumActivities);
    const auto spec = LearnerSpec::defaults(Family::Knn);
    const auto r = cross_validate(spec, ds, 4, 3, 11);
    std::ostringstream out;
    write_evaluate_report(out, config_for("evaluate", spec, OutputFormat::Json), ds, r);
    const auto j = Json::parse(out.str());
    EXPECT_EQ(j.at("report"), "evaluate");
    EXPECT_EQ(j.at("config").at("seed"), 11);
    EXPECT_EQ(j.at("config").at("learner").at("k"), 12);
    EXPECT_FALSE(j.at("config").contains("threads"));
    const auto& cm = j.at("result").at("confusion_matrix");
    EXPECT_EQ(cm.at("classes")[0].at("name"), "STANDING");
    EXPECT_EQ(cm.at("total"), 30);
    EXPECT_TRUE(cm.at("per_class")[0].at("recall").is_null()); // STANDING is absent from the data
    EXPECT_EQ(j.at("result").at("headline"), headline(r));
}

TEST(Reports, TextAndCsvRender) {
    const auto ds = blobs(10, 2, 3, 2);
    const auto spec = LearnerSpec::defaults(Family::NaiveBayes);
    const auto r = cross_validate(spec, ds, 4, 2, 11);
    std::ostringstream text, csv;
    write_evaluate_report(text, config_for("evaluate", spec, OutputFormat::Text), ds, r);
    write_evaluate_report(csv, config_for("evaluate", spec, OutputFormat::Csv), ds, r);
    EXPECT_EQ(text.str().rfind(headline(r), 0), 0u);
    EXPECT_NE(text.str().find("heatmap"), std::string::npos);
    EXPECT_NE(csv.str().find("predicted,true_WALKING"), std::string::npos);
    EXPECT_NE(csv.str().find("\nrecall,"), std::string::npos);
}

TEST(Reports, SerialAndParallelRunsAreByteIdentical) {
    const auto ds = blobs(12, 3, 4, 13, 1.4);
    auto render = [&](unsigned threads) {
        const auto rep = compare(default_specs(), ds, 3, 3, 17, threads);
        auto cfg = config_for("compare", LearnerSpec{}, OutputFormat::Json);
        for (const auto& s : default_specs()) cfg.learners.emplace_back(family_key(s.family));
        std::ostringstream out;
        write_compare_report(out, cfg, ds, rep);
        return out.str();
    };
    EXPECT_EQ(render(1), render(8));
}

TEST(Reports, SummaryFormats) {
    const auto ds = blobs(5, 2, 2, 1);
    const auto rows = summarize_by_activity(ds);
    std::ostringstream json, csv;
    write_summary_report(json, OutputFormat::Json, ds, rows);
    write_summary_report(csv, OutputFormat::Csv, ds, rows);
    EXPECT_EQ(Json::parse(json.str()).at("rows").size(), rows.size());
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "activity_id,activity,feature,count,mean,std,median_abs_dev,max,min");
}
