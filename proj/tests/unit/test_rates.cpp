#include "nesterov_rates/fit.hpp"
#include "nesterov_rates/rates.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>

namespace nr = nesterov_rates;

namespace {

struct Series {
    std::vector<double> t;
    std::vector<double> g;
};

template <class F>
Series synthetic(F f, double t_lo = 1.0, double t_hi = 1e4, int n = 20000) {
    Series s;
    for (int i = 0; i < n; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n - 1));
        s.t.push_back(t);
        s.g.push_back(f(t));
    }
    return s;
}

} // namespace

TEST(Rate, KnownValues) {
    EXPECT_DOUBLE_EQ(nr::theoretical_rate(1, 1.5).exponent, 6.0 / 7.0);
    EXPECT_DOUBLE_EQ(nr::theoretical_rate(4, 3).exponent, 4.8);
    EXPECT_DOUBLE_EQ(nr::theoretical_rate(8, 3).exponent, 6.0);
    EXPECT_DOUBLE_EQ(nr::theoretical_rate(1, 3).exponent, 1.2);
    EXPECT_DOUBLE_EQ(nr::theoretical_rate(6, 3).exponent, 6.0);
    EXPECT_EQ(nr::theoretical_rate(4, 3).branch, nr::Branch::flat_intermediate);
    EXPECT_FALSE(nr::theoretical_rate(4, 3).upper_bound_proven);
    EXPECT_EQ(nr::theoretical_rate(8, 3).branch, nr::Branch::flat_saturated);
    EXPECT_THROW(nr::theoretical_rate(0, 2), std::invalid_argument);
    EXPECT_THROW(nr::theoretical_rate(1, 0.5), std::invalid_argument);
}

TEST(Rate, ContinuousAtBranchBoundaries) {
    // At alpha = (gamma+2)/(gamma-2) both formulas agree.
    for (double g : {2.5, 3.0, 4.0, 6.0}) {
        const double a = (g + 2) / (g - 2);
        EXPECT_NEAR(nr::theoretical_rate(a - 1e-9, g).exponent, nr::theoretical_rate(a, g).exponent,
                    1e-6);
    }
}

TEST(Fit, Line) {
    const std::vector<double> x{0, 1, 2, 3};
    const std::vector<double> y{1, 3, 5, 7};
    const auto f = nr::fit_line(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.rss, 0.0, 1e-24);
}

TEST(Fit, ExactPowerLaw) {
    const auto s = synthetic([](double t) { return 1.0 / (t * t); });
    EXPECT_NEAR(nr::fit_exponent(s.t, s.g).exponent, 2.0, 1e-6);
}

TEST(Fit, OscillatingPowerLaw) {
    const auto s = synthetic([](double t) { return (2.0 + std::sin(t)) / (t * t); });
    EXPECT_NEAR(nr::fit_exponent(s.t, s.g).exponent, 2.0, 0.05);
}

TEST(Fit, ConstantGap) {
    const auto s = synthetic([](double) { return 0.3; });
    EXPECT_NEAR(nr::fit_exponent(s.t, s.g).exponent, 0.0, 1e-12);
}

TEST(Fit, DegenerateAndErrors) {
    const auto zero = synthetic([](double) { return 0.0; });
    EXPECT_TRUE(nr::fit_exponent(zero.t, zero.g).degenerate);
    const auto few = synthetic([](double t) { return 1 / t; }, 1, 100, 8);
    EXPECT_THROW(nr::fit_exponent(few.t, few.g), std::invalid_argument);
}

TEST(Fit, ExponentialTailPrefersLogLinear) {
    const auto s = synthetic([](double t) { return std::exp(-0.01 * t); }, 1, 1000);
    const auto f = nr::fit_exponent(s.t, s.g);
    EXPECT_LT(f.rss_loglinear, f.rss_loglog);
}

TEST(Z, ExactCancellation) {
    const auto s = synthetic([](double t) { return std::pow(t, -1.7); });
    const auto z = nr::z_sequence(s.t, s.g, 1.7);
    for (double v : z.z) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Z, ZeroExponentIsNormalizedGap) {
    const auto s = synthetic([](double t) { return 4.0 / t; }, 1, 10, 50);
    const auto z = nr::z_sequence(s.t, s.g, 0.0);
    for (std::size_t i = 0; i < z.z.size(); ++i) EXPECT_NEAR(z.z[i], s.g[i] / 4.0, 1e-15);
}

TEST(Z, AllZeroDegenerate) {
    const auto s = synthetic([](double) { return 0.0; }, 1, 10, 50);
    EXPECT_TRUE(nr::z_sequence(s.t, s.g, 1.0).degenerate);
}

TEST(Verdict, SyntheticPowerLawPasses) {
    const auto s = synthetic([](double t) { return std::pow(t, -2.5); });
    const auto r = nr::theoretical_rate(2.5 * 4.0 / 4.0, 2.0); // sharp: 2 alpha gamma/(gamma+2)
    ASSERT_DOUBLE_EQ(r.exponent, 2.5);
    const auto v = nr::verify_rate(s.t, s.g, r);
    EXPECT_TRUE(v.boundedness);
    EXPECT_TRUE(v.nonvanishing);
    EXPECT_TRUE(v.passed());
}

TEST(Verdict, FasterDecayFailsNonvanishing) {
    const auto s = synthetic([](double t) { return std::pow(t, -3.5); });
    const auto v = nr::verify_rate(s.t, s.g, nr::theoretical_rate(2.5, 2.0));
    EXPECT_TRUE(v.boundedness);
    EXPECT_FALSE(v.nonvanishing);
    EXPECT_FALSE(v.passed());
}

TEST(Verdict, UnprovenBoundIsNotAsserted) {
    // Slower decay than 4.8: z grows, boundedness fails but is not asserted.
    const auto s = synthetic([](double t) { return std::pow(t, -4.0); });
    const auto v = nr::verify_rate(s.t, s.g, nr::theoretical_rate(4, 3));
    EXPECT_FALSE(v.boundedness);
    EXPECT_TRUE(v.nonvanishing);
    EXPECT_TRUE(v.passed());
}

TEST(Verdict, ShortTailRejected) {
    const auto s = synthetic([](double t) { return 1 / t; }, 1, 50, 200);
    EXPECT_THROW(nr::verify_rate(s.t, s.g, nr::theoretical_rate(1, 2)), std::invalid_argument);
}

TEST(Verdict, JsonFields) {
    const auto s = synthetic([](double t) { return std::pow(t, -2.5); });
    const auto v = nr::verify_rate(s.t, s.g, nr::theoretical_rate(2.5, 2.0));
    const auto j = nlohmann::json::parse(nr::verdict_json(v, "power:gamma=2"));
    for (const char* key : {"objective", "alpha", "gamma", "branch", "theoretical", "fitted",
                            "fitted_err", "z_global_max", "z_tail_ratio", "boundedness",
                            "nonvanishing"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["branch"], "sharp-subcritical");
}
