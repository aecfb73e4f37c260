#include <gtest/gtest.h>

#include <cmath>

#include "misinfo/stats.hpp"
#include "reference_values.hpp"

using namespace misinfo;

TEST(Stats, MeanVariancePercentile) {
    std::vector<double> v = {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
    EXPECT_DOUBLE_EQ(stats::mean(v), 5.0);
    EXPECT_NEAR(stats::sample_variance(v), 4.571428571428571, 1e-12);
    EXPECT_DOUBLE_EQ(stats::median(v), 4.5);
    EXPECT_DOUBLE_EQ(stats::percentile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(stats::percentile({1.0, 2.0, 3.0, 4.0, 5.0}, 1.0), 5.0);
    // linear interpolation at position q*(n-1)
    EXPECT_DOUBLE_EQ(stats::percentile({1.0, 2.0, 3.0, 4.0}, 0.5), 2.5);
    EXPECT_NEAR(stats::percentile({10.0, 20.0, 30.0}, 0.10), 12.0, 1e-12);
}

TEST(Stats, PearsonBasics) {
    std::vector<double> x = {1, 2, 3, 4, 5};
    std::vector<double> y = {2, 4, 6, 8, 10};
    EXPECT_NEAR(stats::pearson(x, y), 1.0, 1e-12);
    std::vector<double> yneg = {10, 8, 6, 4, 2};
    EXPECT_NEAR(stats::pearson(x, yneg), -1.0, 1e-12);
    std::vector<double> constant = {3, 3, 3, 3, 3};
    EXPECT_DOUBLE_EQ(stats::pearson(x, constant), 0.0);
}

TEST(Stats, Chi2ReferenceTables) {
    for (const auto& c : reference::chi2_cases()) {
        const auto r = stats::chi2_2x2(c.n11, c.n10, c.n01, c.n00);
        EXPECT_NEAR(r.statistic, c.statistic, 1e-9 * std::max(1.0, c.statistic));
        EXPECT_NEAR(r.p_value, c.p_value, 1e-9);
    }
}

TEST(Stats, Chi2DegenerateMarginals) {
    const auto r = stats::chi2_2x2(0, 0, 50, 50);  // feature never fires
    EXPECT_DOUBLE_EQ(r.statistic, 0.0);
    EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(Stats, Chi2SurvivalMonotoneInStatistic) {
    double prev = 1.0;
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
        const double p = stats::chi2_sf(x, 1.0);
        EXPECT_LT(p, prev);
        prev = p;
    }
}

TEST(Stats, WelchReferencePairs) {
    for (const auto& c : reference::welch_cases()) {
        const auto r = stats::welch_ttest(c.a, c.b);
        EXPECT_NEAR(r.t_statistic, c.t, 1e-9);
        EXPECT_NEAR(r.degrees_of_freedom, c.df, 1e-7);
        EXPECT_NEAR(r.p_value, c.p, 1e-9);
    }
}

TEST(Stats, WelchPatternExample) {
    const auto a = reference::welch_pattern_a();
    const auto b = reference::welch_pattern_b();
    const auto r = stats::welch_ttest(a, b);
    EXPECT_NEAR(r.t_statistic, reference::kWelchPatternT, 1e-9);
    EXPECT_NEAR(r.degrees_of_freedom, reference::kWelchPatternDf, 1e-9);
    // p ~ 1e-82; check the relative error since 1e-9 absolute is vacuous here
    EXPECT_NEAR(r.p_value / reference::kWelchPatternP, 1.0, 1e-6);
}

TEST(Stats, WelchAntisymmetry) {
    std::vector<double> a = {1.0, 2.5, 3.0, 4.5};
    std::vector<double> b = {2.0, 3.5, 5.0, 6.5, 7.0};
    const auto ab = stats::welch_ttest(a, b);
    const auto ba = stats::welch_ttest(b, a);
    EXPECT_DOUBLE_EQ(ab.t_statistic, -ba.t_statistic);
    EXPECT_DOUBLE_EQ(ab.p_value, ba.p_value);
}

TEST(Stats, WelchIdenticalSamples) {
    std::vector<double> a = {2010, 2011, 2012, 2009, 2010};
    const auto r = stats::welch_ttest(a, a);
    EXPECT_DOUBLE_EQ(r.t_statistic, 0.0);
    EXPECT_DOUBLE_EQ(r.p_value, 1.0);
}

TEST(Stats, WelchErrors) {
    std::vector<double> one = {1.0};
    std::vector<double> ok = {1.0, 2.0, 3.0};
    std::vector<double> flat = {5.0, 5.0, 5.0};
    EXPECT_THROW(stats::welch_ttest(one, ok), Error);
    EXPECT_THROW(stats::welch_ttest(ok, flat), Error);
}

TEST(Stats, IncompleteBetaEdges) {
    EXPECT_DOUBLE_EQ(stats::betainc(2.0, 3.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(stats::betainc(2.0, 3.0, 1.0), 1.0);
    // I_x(1,1) = x
    EXPECT_NEAR(stats::betainc(1.0, 1.0, 0.37), 0.37, 1e-12);
}

TEST(Stats, TTwoSidedBasics) {
    EXPECT_DOUBLE_EQ(stats::t_two_sided_p(0.0, 10.0), 1.0);
    // symmetric in t
    EXPECT_DOUBLE_EQ(stats::t_two_sided_p(2.3, 7.0), stats::t_two_sided_p(-2.3, 7.0));
}
