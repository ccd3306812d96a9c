// Acceptance suite: one PASS/FAIL line per criterion.
//
//   nesterov_rates_acceptance          run every criterion
//   nesterov_rates_acceptance 3 5      run the listed criteria
//
// Exit status is 0 when every selected criterion passes. Lines starting with
// "  info:" are diagnostics and never affect the status.

#include "nesterov_rates/harness.hpp"
#include "nesterov_rates/lyapunov.hpp"
#include "nesterov_rates/objective.hpp"
#include "nesterov_rates/rates.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace nr = nesterov_rates;
namespace fs = std::filesystem;

namespace {

struct Report {
    bool pass = true;
    std::vector<std::string> details;
    std::vector<std::string> info;

    void check(bool ok, std::string what) {
        pass = pass && ok;
        details.push_back((ok ? "" : "NOT ") + std::move(what));
    }
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

nr::Trajectory scheme_run(const std::string& objective, double alpha, double h, long long steps,
                          nr::Mode mode, long long stride = 100) {
    nr::ExperimentConfig c;
    c.objective = objective;
    c.alpha = alpha;
    c.mode = mode;
    c.h = h;
    c.steps = steps;
    c.stride = stride;
    c.x0 = {0.5};
    return nr::run(c, nr::parse_objective(objective));
}

nr::Trajectory ode_run(double gamma, double alpha, double t0, double t_end, double dt,
                       long long stride) {
    nr::ExperimentConfig c;
    c.objective = "power:gamma=" + std::to_string(gamma);
    c.alpha = alpha;
    c.mode = nr::Mode::ode_rk4;
    c.t0 = t0;
    c.dt = dt;
    c.steps = std::llround((t_end - t0) / dt);
    c.stride = stride;
    c.x0 = {0.5};
    return nr::run(c, nr::make_power(gamma));
}

std::string fit_text(const nr::RateVerdict& v) {
    return fmt("fitted %.4f +/- %.4f (theoretical %.4f), z tail ratio %.4f", v.fit.exponent,
               v.fit.exponent_err, v.regime.exponent, v.z_tail_ratio);
}

// Same fit on the continuous-time reference, for comparison with the scheme.
void ode_fit_info(Report& r, double gamma, double alpha) {
    const auto traj = ode_run(gamma, alpha, 1.0, 1000.0, 1e-3, 10);
    const auto v = nr::verify_rate(traj, nr::theoretical_rate(alpha, gamma));
    r.info.push_back(fmt("RK4 reference (gamma=%g, alpha=%g, t in [1, 1000]): ", gamma, alpha) +
                     fit_text(v) + fmt(", rss log-linear/log-log %.3g",
                                       v.fit.rss_loglinear / v.fit.rss_loglog));
}

// 1. power gamma=1.5, alpha=1, prox scheme at full scale.
Report criterion1() {
    Report r;
    const auto start = std::chrono::steady_clock::now();
    const auto traj =
        scheme_run("power:gamma=1.5", 1.0, 1e-5, 2'000'000, nr::Mode::prox_nesterov);
    const auto v = nr::verify_rate(traj, nr::theoretical_rate(1.0, 1.5));
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.check(std::abs(v.fit.exponent - 6.0 / 7.0) <= 0.1,
            std::string("exponent within 6/7 +/- 0.1: ") + fit_text(v));
    r.check(v.boundedness, "boundedness");
    r.check(v.nonvanishing, "nonvanishing");
    r.check(seconds < 30.0, fmt("runtime %.2f s < 30 s", seconds));
    r.info.push_back(fmt("scheme tail window t in [%.4g, %.4g], rss log-linear/log-log %.3g",
                         v.tail_t_lo, v.tail_t_hi, v.fit.rss_loglinear / v.fit.rss_loglog));
    ode_fit_info(r, 1.5, 1.0);
    return r;
}

// 2. power gamma=2, alpha=6, gradient scheme at full scale.
Report criterion2() {
    Report r;
    const auto traj = scheme_run("power:gamma=2", 6.0, 1e-5, 2'000'000, nr::Mode::nesterov);
    const auto v = nr::verify_rate(traj, nr::theoretical_rate(6.0, 2.0));
    r.check(std::abs(v.fit.exponent - 6.0) <= 0.3,
            std::string("exponent within 6 +/- 0.3: ") + fit_text(v));
    r.check(v.nonvanishing, "nonvanishing");
    r.check(v.fit.rss_loglinear >= 2.0 * v.fit.rss_loglog,
            fmt("not exponential: rss log-linear %.4g >= 2 x rss log-log %.4g",
                v.fit.rss_loglinear, v.fit.rss_loglog));
    // Per-step contraction of the scheme on x^2 is sqrt(1 - 2h).
    const double n_end = static_cast<double>(traj.records.back().n);
    r.info.push_back(fmt("scheme damping factor (1 - 2h)^n at the last step: %.3g",
                         std::pow(1.0 - 2e-5, n_end)));
    ode_fit_info(r, 2.0, 6.0);
    ode_fit_info(r, 2.0, 1.0);
    return r;
}

// 3. gamma=3 at alpha in {1, 4, 6, 8}.
Report criterion3() {
    Report r;
    const double alphas[] = {1, 4, 6, 8};
    const double expected[] = {1.2, 4.8, 6, 6};
    for (int i = 0; i < 4; ++i) {
        const double a = alphas[i];
        const auto regime = nr::theoretical_rate(a, 3.0);
        r.check(std::abs(regime.exponent - expected[i]) < 1e-12,
                fmt("alpha=%g theoretical %.4g == %.4g", a, regime.exponent, expected[i]));
        const auto traj = scheme_run("power:gamma=3", a, 1e-5, 2'000'000, nr::Mode::nesterov);
        const auto v = nr::verify_rate(traj, regime);
        if (a == 4) {
            r.check(v.nonvanishing, std::string("alpha=4 nonvanishing: ") + fit_text(v));
            r.info.push_back(fmt("alpha=4 boundedness (not asserted): %s",
                                 v.boundedness ? "pass" : "fail"));
        } else {
            r.check(std::abs(v.fit.exponent - regime.exponent) <= 0.3,
                    fmt("alpha=%g exponent within +/- 0.3: ", a) + fit_text(v));
        }
    }
    return r;
}

// 4. H monotone along RK4 trajectories on [0.1, 100].
Report criterion4() {
    Report r;
    struct Case {
        double gamma, alpha;
        nr::Direction dir;
    };
    for (const Case c : {Case{1.5, 1, nr::Direction::nonincreasing},
                         Case{1.0, 3, nr::Direction::nonincreasing},
                         Case{2.0, 6, nr::Direction::nondecreasing}}) {
        const auto traj = ode_run(c.gamma, c.alpha, 0.1, 100.0, 1e-4, 1);
        const auto params = nr::LyapunovParams::sharp(c.alpha, c.gamma);
        const auto e = nr::energy_along(traj, params, nr::Vector::Zero(1),
                                        nr::theoretical_rate(c.alpha, c.gamma).exponent);
        const auto m = nr::check_H_monotone(e, c.dir, 1e-9);
        r.check(m.holds, fmt("gamma=%g alpha=%g %s: worst scaled step %.3e at t=%.4f", c.gamma,
                             c.alpha,
                             c.dir == nr::Direction::nonincreasing ? "non-increasing"
                                                                   : "non-decreasing",
                             m.worst_violation, m.t_from));
    }
    return r;
}

// 5. H' equals its closed form.
Report criterion5() {
    Report r;
    for (double gamma : {1.5, 2.0}) {
        for (double alpha : {1.0, 3.0, 6.0}) {
            const auto traj = ode_run(gamma, alpha, 1.0, 10.0, 1e-4, 1);
            const auto params = nr::LyapunovParams::sharp(alpha, gamma);
            const auto h = nr::check_Hprime_closed_form(traj, params, gamma, nr::Vector::Zero(1));
            r.check(h.max_relative_residual <= 5e-4,
                    fmt("gamma=%g alpha=%g: K1=%.4g, max relative residual %.3e", gamma, alpha,
                        params.K1(), h.max_relative_residual));
        }
    }
    return r;
}

// 6. Velocity decay and finite path length for gamma=3, alpha=6.
Report criterion6() {
    Report r;
    const auto traj = scheme_run("power:gamma=3", 6.0, 1e-5, 2'000'000, nr::Mode::nesterov);
    const double t_end = traj.records.back().t;
    const auto d = nr::velocity_decay_exponent(traj, std::sqrt(t_end), t_end);
    r.check(!d.degenerate && d.exponent <= -2.7,
            fmt("|v| envelope slope %.4f <= -2.7 on t in [%.4g, %.4g]", d.exponent,
                std::sqrt(t_end), t_end));
    const auto path = nr::path_length(traj);
    r.check(path.last_decade_fraction() <= 0.01,
            fmt("path length %.6f, last decade share %.3e <= 1%%", path.total,
                path.last_decade_fraction()));
    return r;
}

// 7. Geometry probes.
Report criterion7() {
    Report r;
    const nr::Vector origin = nr::Vector::Zero(1);
    const double tested[] = {1.0, 1.25, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
    for (double gamma : {1.5, 2.0, 3.0}) {
        const auto f = nr::make_power(gamma);
        int h1_ok = 0;
        int h2_ok = 0;
        for (double g : tested) {
            const auto h1 = nr::probe_H1(f, g, origin, 1.0, 1000, 17);
            if (h1.holds == (g <= gamma) && (h1.holds || h1.witness)) ++h1_ok;
            else r.details.push_back(fmt("NOT H1(%g) on |x|^%g: holds=%d", g, gamma, h1.holds));
            const auto h2 = nr::probe_H2(f, g, 1.0, origin, 1.0, 1000, 17);
            if (h2.holds == (g >= gamma) && (h2.holds || h2.witness)) ++h2_ok;
            else r.details.push_back(fmt("NOT H2(%g) on |x|^%g: holds=%d", g, gamma, h2.holds));
        }
        const int n = static_cast<int>(std::size(tested));
        r.pass = r.pass && h1_ok == n && h2_ok == n;
        r.details.push_back(fmt("|x|^%g: H1 verdicts %d/%d, H2 verdicts %d/%d", gamma, h1_ok, n,
                                h2_ok, n));
    }
    const auto plateau = nr::make_plateau(2.0, 1.0);
    const auto p = nr::probe_H2(plateau, 2.0, 1.0, origin, 3.0, 1000, 17);
    r.check(p.holds, fmt("plateau a=1 gamma=2 H2(2) on radius 3: worst margin %.3e",
                         p.worst_margin));
    return r;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 8. Infrastructure.
Report criterion8() {
    Report r;

    // Prox optimality residuals.
    {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> gamma_dist(1.0, 4.0);
        std::uniform_real_distribution<double> log_h(-6.0, 0.0);
        std::uniform_real_distribution<double> y_dist(-3.0, 3.0);
        const double fixed[] = {1.0, 1.5, 2.0, 3.0};
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double gamma = i % 2 == 0 ? fixed[(i / 2) % 4] : gamma_dist(rng);
            const double h = std::pow(10.0, log_h(rng));
            const double y = y_dist(rng);
            const double z = nr::prox_power(gamma, h, y);
            double resid;
            if (z == 0.0) {
                // 0 is optimal iff y lies in the subdifferential h d|.|^gamma(0).
                resid = gamma == 1.0 ? std::max(0.0, std::abs(y) - h) : std::abs(y);
            } else {
                resid = std::abs(z - y + h * gamma * std::pow(std::abs(z), gamma - 1.0) *
                                             std::copysign(1.0, z));
            }
            worst = std::max(worst, resid / std::max(1.0, std::abs(y)));
        }
        r.check(worst <= 1e-10, fmt("prox residual %.3e <= 1e-10 over 1000 cases", worst));
    }

    // Gradients against central differences.
    {
        nr::Matrix A(3, 2);
        A << 1, 2, 0, 1, 3, -1;
        nr::Vector b(3);
        b << 1, -1, 2;
        struct Case {
            nr::ObjectiveSpec f;
            double x;
        };
        double worst = 0.0;
        for (const auto& c : {Case{nr::make_power(1.5), 0.7}, Case{nr::make_power(2), -0.3},
                              Case{nr::make_power(3), 0.5}, Case{nr::make_plateau(2, 1), 2.0},
                              Case{nr::make_plateau(3, 0.5), -1.2},
                              Case{nr::make_least_squares(A, b), 0.4}}) {
            const nr::Vector x = nr::Vector::Constant(c.f.dim, c.x);
            worst = std::max(worst, nr::check_gradient(c.f, x, 1e-5));
        }
        r.check(worst <= 1e-6, fmt("gradient finite-difference error %.3e <= 1e-6", worst));
    }

    // RK4 order on v' = -(alpha/t) v, exact v0 (t0/t)^alpha.
    {
        nr::ObjectiveSpec zero;
        zero.value = [](const nr::Vector&) { return 0.0; };
        zero.gradient = [](const nr::Vector& x) { return nr::Vector::Zero(x.size()).eval(); };
        const double alpha = 3.0;
        double previous = 0.0;
        double min_order = INFINITY;
        for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
            nr::OdeState s{1.0, nr::Vector::Zero(1), nr::Vector::Ones(1)};
            const long long n = std::llround(1.0 / dt);
            for (long long i = 0; i < n; ++i) s = nr::ode_rk4_step(s, zero, alpha, dt);
            const double err = std::abs(s.v[0] - std::pow(0.5, alpha));
            if (previous > 0.0) min_order = std::min(min_order, std::log2(previous / err));
            previous = err;
        }
        r.check(min_order >= 3.9, fmt("RK4 observed order %.3f >= 3.9", min_order));
    }

    // Scheme versus ODE: max |x_scheme(t) - x(t)| on t = 0.5, 1, ..., 4.
    {
        const double gamma = 2.0;
        const double alpha = 3.0;
        const auto f = nr::make_power(gamma);
        const double x0 = 0.5;
        const double t0 = 1e-2;
        const double dt = 1e-5;
        // Series start x(t) = x0 - g t^2 / (2 (1 + alpha)), x'(t) = -g t / (1 + alpha).
        const nr::Vector g = f.gradient(nr::Vector::Constant(1, x0));
        nr::OdeState s{t0, nr::Vector::Constant(1, x0) - g * (t0 * t0 / (2 * (1 + alpha))),
                       -g * (t0 / (1 + alpha))};
        std::vector<double> reference;
        const long long n = std::llround((4.0 - t0) / dt);
        for (long long k = 1; k <= n; ++k) {
            s = nr::ode_rk4_step(s, f, alpha, dt);
            s.t = t0 + static_cast<double>(k) * dt;
            if (std::abs(s.t / 0.5 - std::round(s.t / 0.5)) < 1e-9) reference.push_back(s.x[0]);
        }
        double previous = 0.0;
        double min_factor = INFINITY;
        std::string errors;
        for (double sqrt_h : {0.02, 0.01, 0.005, 0.0025}) {
            nr::SchemeState st;
            st.x_curr = st.x_prev = nr::Vector::Constant(1, x0);
            st.alpha = alpha;
            st.h = sqrt_h * sqrt_h;
            const long long per_half = std::llround(0.5 / sqrt_h);
            double err = 0.0;
            std::size_t j = 0;
            for (long long k = 1; k <= 8 * per_half; ++k) {
                st = nr::nesterov_step(st, f);
                if (k % per_half == 0) err = std::max(err, std::abs(st.x_curr[0] - reference[j++]));
            }
            if (previous > 0.0) min_factor = std::min(min_factor, previous / err);
            previous = err;
            errors += fmt(" %.3g", err);
        }
        r.check(min_factor >= 1.5,
                fmt("scheme/ODE error factor %.3f >= 1.5 per sqrt(h) halving (errors%s)",
                    min_factor, errors.c_str()));
    }

    // Byte-identical reruns, including a grid under different worker counts.
    {
        const fs::path root = fs::temp_directory_path() / "nesterov_rates_acceptance";
        fs::remove_all(root);
        nr::GridSpec grid;
        grid.base.objective = "power:gamma=1.5";
        grid.base.h = 1e-4;
        grid.base.steps = 100'000;
        grid.cells = {{1, 1.5}, {6, 1.5}, {6, 3}};
        grid.base.output_dir = (root / "a").string();
        grid.parallelism = 1;
        nr::run_grid(grid);
        grid.base.output_dir = (root / "b").string();
        grid.parallelism = 3;
        nr::run_grid(grid);
        int files = 0;
        int identical = 0;
        for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
            if (!entry.is_regular_file()) continue;
            ++files;
            const auto twin = root / "b" / fs::relative(entry.path(), root / "a");
            if (fs::exists(twin) && slurp(entry.path()) == slurp(twin)) ++identical;
        }
        r.check(files > 0 && identical == files,
                fmt("byte-identical reruns: %d/%d files", identical, files));
        fs::remove_all(root);
    }
    return r;
}

struct Criterion {
    const char* title;
    std::function<Report()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {"rate gamma=1.5 alpha=1 (prox scheme)", criterion1},
        {"rate gamma=2 alpha=6 (gradient scheme)", criterion2},
        {"rates gamma=3 alpha in {1,4,6,8}", criterion3},
        {"Lyapunov monotonicity", criterion4},
        {"closed-form H'", criterion5},
        {"velocity decay and path length", criterion6},
        {"geometry probes", criterion7},
        {"infrastructure", criterion8},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
            return 2;
        }
        selected.push_back(k);
    }
    if (selected.empty()) {
        for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);
    }

    bool all = true;
    for (int k : selected) {
        const auto& c = criteria[static_cast<std::size_t>(k - 1)];
        Report r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.details.push_back(std::string("error: ") + e.what());
        }
        std::string joined;
        for (const auto& d : r.details) joined += (joined.empty() ? "" : "; ") + d;
        std::printf("criterion %d: %s  %s: %s\n", k, r.pass ? "PASS" : "FAIL", c.title,
                    joined.c_str());
        for (const auto& i : r.info) std::printf("  info: %s\n", i.c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
