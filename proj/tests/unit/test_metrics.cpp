#include <gtest/gtest.h>

#include <helm/error.hpp>
#include <helm/metrics.hpp>

#include <cmath>

using namespace helm;

namespace {

std::vector<Label> labels(int abnormal, int healthy) {
    std::vector<Label> v(static_cast<std::size_t>(abnormal), Label::abnormal);
    v.insert(v.end(), static_cast<std::size_t>(healthy), Label::healthy);
    return v;
}

}  // namespace

TEST(Metrics, PerfectDetector) {
    const Rates r = score_rates(labels(0, 100), labels(100, 0));
    EXPECT_EQ(r.tpr, 1.0);
    EXPECT_EQ(r.fpr, 0.0);
    EXPECT_EQ(r.accuracy, 1.0);
    EXPECT_EQ(r.precision, 1.0);
    EXPECT_EQ(r.f1, 1.0);
}

TEST(Metrics, BlindDetector) {
    const Rates r = score_rates(labels(0, 50), labels(0, 70));
    EXPECT_EQ(r.tpr, 0.0);
    EXPECT_EQ(r.fpr, 0.0);
    EXPECT_EQ(r.accuracy, 0.5);
    EXPECT_EQ(r.precision, 0.0);
    EXPECT_EQ(r.f1, 0.0);
}

TEST(Metrics, PublishedRealCaseRow) {
    // 89.1% detected with no false alarm reads as 95 accuracy.
    const Rates r = rates_from(0.891, 0.0);
    EXPECT_EQ(std::lround(r.accuracy * 100), 95);
}

TEST(Metrics, DerivedRatesAreConsistent) {
    const Rates r = score_rates(labels(3, 97), labels(40, 60));
    EXPECT_DOUBLE_EQ(r.fpr, 0.03);
    EXPECT_DOUBLE_EQ(r.tpr, 0.4);
    EXPECT_DOUBLE_EQ(r.tpr + r.fnr, 1.0);
    EXPECT_DOUBLE_EQ(r.tnr + r.fpr, 1.0);
    EXPECT_DOUBLE_EQ(r.accuracy, (0.4 + 0.97) / 2);
    EXPECT_DOUBLE_EQ(r.precision, 0.4 / 0.43);
    EXPECT_DOUBLE_EQ(r.f1, 0.8 / 1.43);
}

TEST(Metrics, EmptySegmentIsAnError) {
    EXPECT_THROW(score_rates({}, labels(1, 1)), InvalidArgument);
    EXPECT_THROW(score_rates(labels(1, 1), {}), InvalidArgument);
}

TEST(Metrics, MagnificationAveragesTruePositivesOnly) {
    std::vector<Detection> d(3);
    d[0] = {0.1, Label::healthy, 0.5};
    d[1] = {0.4, Label::abnormal, 2.0};
    d[2] = {0.8, Label::abnormal, 4.0};
    EXPECT_DOUBLE_EQ(*mean_true_positive_magnification(d), 3.0);
    EXPECT_FALSE(mean_true_positive_magnification(std::span(d).first(1)).has_value());
    EXPECT_DOUBLE_EQ(flag_rate(d), 2.0 / 3.0);
}
