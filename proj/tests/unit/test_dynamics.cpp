#include "nesterov_rates/dynamics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

namespace nr = nesterov_rates;

namespace {

nr::Vector scalar(double x) { return nr::Vector::Constant(1, x); }

nr::ObjectiveSpec zero_objective() {
    nr::ObjectiveSpec f;
    f.name = "zero";
    f.value = [](const nr::Vector&) { return 0.0; };
    f.gradient = [](const nr::Vector& x) { return nr::Vector::Zero(x.size()).eval(); };
    f.minimizers.center = scalar(0);
    f.distance_to_minset = [](const nr::Vector&) { return 0.0; };
    return f;
}

nr::SchemeState scheme(double x, double alpha, double h) {
    nr::SchemeState s;
    s.x_curr = scalar(x);
    s.x_prev = scalar(x);
    s.alpha = alpha;
    s.h = h;
    return s;
}

} // namespace

TEST(Scheme, HandRecurrence) {
    const auto f = nr::make_power(2);
    auto s = nr::nesterov_step(scheme(1, 3, 0.01), f);
    EXPECT_EQ(s.n, 1);
    EXPECT_NEAR(s.x_curr[0], 0.98, 1e-15);
    s = nr::nesterov_step(s, f);
    EXPECT_NEAR(s.x_curr[0], 0.9555, 1e-15);
}

TEST(Scheme, MinimizerIsFixed) {
    const auto f = nr::make_power(3);
    auto s = scheme(0, 3, 0.1);
    for (int i = 0; i < 5; ++i) s = nr::nesterov_step(s, f);
    EXPECT_EQ(s.x_curr[0], 0.0);
}

TEST(ProxScheme, Examples) {
    auto s = nr::prox_nesterov_step(scheme(0.05, 3, 0.1), nr::make_power(1));
    EXPECT_EQ(s.x_curr[0], 0.0);
    s = nr::prox_nesterov_step(scheme(3, 3, 0.5), nr::make_power(2));
    EXPECT_DOUBLE_EQ(s.x_curr[0], 1.5);
    s = scheme(0, 3, 0.5);
    for (int i = 0; i < 5; ++i) s = nr::prox_nesterov_step(s, nr::make_power(1.5));
    EXPECT_EQ(s.x_curr[0], 0.0);
}

TEST(ProxScheme, MissingProxIsConfigurationError) {
    auto f = zero_objective();
    nr::ExperimentConfig c;
    c.mode = nr::Mode::prox_nesterov;
    c.steps = 10;
    EXPECT_THROW(nr::run(c, f), std::invalid_argument);
}

TEST(Rk4, PureDampingOrder) {
    // v' = -(alpha/t) v has v(t) = v0 (t0/t)^alpha.
    const auto f = zero_objective();
    const double alpha = 3.0;
    double previous = 0.0;
    for (double dt : {0.1, 0.05, 0.025}) {
        nr::OdeState s{1.0, scalar(0), scalar(1)};
        const int n = static_cast<int>(std::lround(1.0 / dt));
        for (int i = 0; i < n; ++i) s = nr::ode_rk4_step(s, f, alpha, dt);
        EXPECT_NEAR(s.t, 2.0, 1e-12);
        const double err = std::abs(s.v[0] - std::pow(0.5, alpha));
        if (previous > 0.0) EXPECT_GE(std::log2(previous / err), 3.9);
        previous = err;
    }
}

TEST(Rk4, EquilibriumIsConstant) {
    nr::OdeState s{1.0, scalar(0), scalar(0)};
    for (int i = 0; i < 10; ++i) s = nr::ode_rk4_step(s, nr::make_power(2), 3, 0.01);
    EXPECT_EQ(s.x[0], 0.0);
    EXPECT_EQ(s.v[0], 0.0);
}

TEST(Rk4, Preconditions) {
    const nr::OdeState s{1.0, scalar(1), scalar(0)};
    const auto f = nr::make_power(2);
    EXPECT_THROW(nr::ode_rk4_step(s, f, 0.0, 0.01), std::invalid_argument);
    EXPECT_THROW(nr::ode_rk4_step(s, f, 3.0, 0.0), std::invalid_argument);
    EXPECT_THROW(nr::ode_rk4_step(s, f, 3.0, 2.0), std::invalid_argument);
}

TEST(Rk4, CrossingSplitKeepsAccuracyAtKink) {
    // |x|^1.5 has an unbounded Hessian at 0; splitting keeps the step error small.
    const auto f = nr::make_power(1.5);
    auto run_to = [&](double dt) {
        nr::OdeState s{1.0, scalar(0.5), scalar(0)};
        const int n = static_cast<int>(std::lround(4.0 / dt));
        for (int i = 0; i < n; ++i) s = nr::ode_rk4_step(s, f, 1.0, dt);
        return s.x[0];
    };
    const double ref = run_to(1e-4);
    EXPECT_LT(std::abs(run_to(1e-2) - ref), 1e-4);
}

TEST(Run, OneStepKeepsEndpoints) {
    nr::ExperimentConfig c;
    c.steps = 1;
    c.stride = 100;
    const auto t = nr::run(c, nr::make_power(2));
    ASSERT_EQ(t.records.size(), 2u);
    EXPECT_EQ(t.records[0].n, 0);
    EXPECT_EQ(t.records[1].n, 1);
    EXPECT_DOUBLE_EQ(t.records[1].t, std::sqrt(c.h));
}

TEST(Run, GapDecreases) {
    nr::ExperimentConfig c;
    c.alpha = 6;
    c.h = 1e-4;
    c.steps = 100000;
    const auto t = nr::run(c, nr::make_power(2));
    ASSERT_TRUE(t.ok());
    EXPECT_LT(t.records.back().gap, t.records.front().gap);
}

TEST(Run, PlateauAtRest) {
    nr::ExperimentConfig c;
    c.mode = nr::Mode::ode_rk4;
    c.x0 = {0.3};
    c.steps = 1000;
    c.stride = 10;
    const auto t = nr::run(c, nr::make_plateau(2, 1));
    for (const auto& r : t.records) EXPECT_EQ(r.gap, 0.0);
}

TEST(Run, AutoModeAndTimes) {
    nr::ExperimentConfig c;
    c.objective = "power:gamma=1.5";
    EXPECT_EQ(nr::resolve_mode(c, nr::make_power(1.5)), nr::Mode::prox_nesterov);
    EXPECT_EQ(nr::resolve_mode(c, nr::make_power(2)), nr::Mode::nesterov);
    EXPECT_DOUBLE_EQ(nr::record_time(nr::Mode::nesterov, 100, 1e-4, 0), 1.0);
    EXPECT_DOUBLE_EQ(nr::record_time(nr::Mode::ode_rk4, 10, 0.1, 1.0), 2.0);
    EXPECT_DOUBLE_EQ(nr::integrator_start(0.0, 0.01), 0.01);
}

TEST(Run, DivergenceStopsEarly) {
    nr::ExperimentConfig c;
    c.h = 10.0; // far above 1/L for x^2
    c.steps = 100000;
    c.stride = 1;
    const auto t = nr::run(c, nr::make_power(2));
    EXPECT_FALSE(t.ok());
    EXPECT_LT(t.records.size(), 100000u);
}

TEST(Run, CsvHeader) {
    nr::ExperimentConfig c;
    c.steps = 2;
    c.stride = 1;
    c.x0 = {0.5, 0.25};
    std::ostringstream out;
    nr::write_trajectory_csv(nr::run(c, nr::make_power(2, 2)), out);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "n,t,x_0,x_1,v_0,v_1,gap");
}
