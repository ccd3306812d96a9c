#include "nesterov_rates/lyapunov.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nesterov_rates {

const char* to_string(Regime regime) {
    switch (regime) {
    case Regime::sharp: return "sharp";
    case Regime::flat: return "flat";
    case Regime::manual: return "manual";
    }
    return "manual";
}

LyapunovParams::LyapunovParams(double alpha, double gamma, double lambda, double p, Regime regime)
    : alpha_(alpha), gamma_(gamma), lambda_(lambda), xi_(lambda * (lambda + 1.0 - alpha)), p_(p),
      regime_(regime) {
    if (!(alpha > 0.0)) throw std::invalid_argument("Lyapunov parameters need alpha > 0");
    if (!(gamma >= 1.0)) throw std::invalid_argument("Lyapunov parameters need gamma >= 1");
    K1_ = regime == Regime::sharp ? sharp_K1(alpha, gamma) : xi_ * (p_ - 2.0 * lambda_);
}

LyapunovParams LyapunovParams::sharp(double alpha, double gamma) {
    return {alpha, gamma, 2.0 * alpha / (gamma + 2.0), 2.0 * gamma * alpha / (gamma + 2.0) - 2.0,
            Regime::sharp};
}

LyapunovParams LyapunovParams::flat(double alpha, double gamma) {
    if (!(gamma > 2.0)) throw std::invalid_argument("flat Lyapunov regime requires gamma > 2");
    return {alpha, gamma, 2.0 / (gamma - 2.0), 4.0 / (gamma - 2.0), Regime::flat};
}

LyapunovParams LyapunovParams::manual(double alpha, double gamma, double lambda, double p) {
    return {alpha, gamma, lambda, p, Regime::manual};
}

double sharp_K1(double alpha, double gamma) {
    const double g2 = gamma + 2.0;
    return 4.0 * alpha * gamma / (g2 * g2 * g2) * (1.0 + 2.0 / gamma - alpha) *
           (alpha * (gamma - 2.0) - gamma - 2.0);
}

LyapunovParams select_params(double alpha, double gamma1, std::optional<Regime> hint) {
    Regime regime = Regime::sharp;
    if (hint) {
        regime = *hint;
    } else if (gamma1 > 2.0 && alpha >= (gamma1 + 2.0) / (gamma1 - 2.0)) {
        regime = Regime::flat;
    }
    switch (regime) {
    case Regime::flat: return LyapunovParams::flat(alpha, gamma1);
    case Regime::manual:
        throw std::invalid_argument("manual Lyapunov parameters need explicit lambda and p");
    case Regime::sharp: break;
    }
    return LyapunovParams::sharp(alpha, gamma1);
}

std::vector<EnergyRecord> energy_along(const Trajectory& traj, const LyapunovParams& params,
                                       const Vector& x_star, double rate) {
    std::vector<EnergyRecord> out;
    out.reserve(traj.records.size());
    const double lambda = params.lambda();
    for (const auto& r : traj.records) {
        if (!(r.t > 0.0)) continue;
        const Vector dx = r.x - x_star;
        EnergyRecord e;
        e.t = r.t;
        e.a = r.t * r.gap;
        e.b = (lambda * dx + r.t * r.v).squaredNorm() / (2.0 * r.t);
        e.c = dx.squaredNorm() / (2.0 * r.t);
        e.E = r.t * (e.a + e.b + params.xi() * e.c);
        e.H = std::pow(r.t, params.p()) * e.E;
        e.z = r.gap * std::pow(r.t, rate);
        out.push_back(e);
    }
    return out;
}

MonotoneVerdict check_H_monotone(std::span<const EnergyRecord> records, Direction direction,
                                 double tol) {
    if (records.size() < 2) throw std::invalid_argument("monotonicity check needs two records");
    if (!(tol >= 0.0)) throw std::invalid_argument("monotonicity tolerance must be >= 0");
    const double sign = direction == Direction::nonincreasing ? 1.0 : -1.0;
    MonotoneVerdict v;
    v.worst_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
        const double step = sign * (records[i + 1].H - records[i].H);
        const double scaled = step / std::max(1.0, std::abs(records[i].H));
        if (scaled > v.worst_violation) {
            v.worst_violation = scaled;
            v.t_from = records[i].t;
            v.t_to = records[i + 1].t;
        }
    }
    v.holds = v.worst_violation <= tol;
    return v;
}

HPrimeCheck check_Hprime_closed_form(const Trajectory& traj, const LyapunovParams& params,
                                     double gamma, const Vector& x_star, double scale_window) {
    if (traj.mode != Mode::ode_rk4) {
        throw std::invalid_argument(
            "closed-form H' check needs an integrator trajectory; scheme velocities are only "
            "first-order accurate");
    }
    if (!(scale_window > 0.0)) throw std::invalid_argument("scale window must be positive");
    const auto energies = energy_along(traj, params, x_star, 0.0);
    if (energies.size() < 3) throw std::invalid_argument("closed-form H' check needs 3 records");

    const double ca = 2.0 - gamma * params.lambda() + params.p();
    const double cb = params.coeff_b();
    const double cc = params.xi() * (params.p() - 2.0 * params.lambda());

    const std::size_t n = energies.size();
    std::vector<double> exact(n);
    bool vanishes = true;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = energies[i];
        exact[i] = std::pow(e.t, params.p()) * (ca * e.a + cb * e.b + cc * e.c);
        if (exact[i] != 0.0) vanishes = false;
    }

    // Sliding maximum of |H'| over |t_j - t_i| <= scale_window.
    std::vector<double> scale(n, 0.0);
    std::deque<std::size_t> window;
    std::size_t right = 0;
    std::size_t left = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (right < n && energies[right].t <= energies[i].t + scale_window) {
            while (!window.empty() && std::abs(exact[window.back()]) <= std::abs(exact[right])) {
                window.pop_back();
            }
            window.push_back(right++);
        }
        while (energies[left].t < energies[i].t - scale_window) ++left;
        while (window.front() < left) window.pop_front();
        scale[i] = std::abs(exact[window.front()]);
    }

    HPrimeCheck check;
    check.derivative_vanishes = vanishes;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double fd = (energies[i + 1].H - energies[i - 1].H) /
                          (energies[i + 1].t - energies[i - 1].t);
        const double denom =
            vanishes ? std::abs(energies[i].H) / energies[i].t : scale[i];
        const double residual = std::abs(fd - exact[i]);
        const double rel = denom > 0.0 ? residual / denom : (residual > 0.0 ? INFINITY : 0.0);
        ++check.n_points;
        if (rel > check.max_relative_residual) {
            check.max_relative_residual = rel;
            check.t_worst = energies[i].t;
        }
    }
    return check;
}

double relative_energy_drift(std::span<const EnergyRecord> records) {
    if (records.empty()) return 0.0;
    const double h0 = records.front().H;
    double worst = 0.0;
    for (const auto& r : records) worst = std::max(worst, std::abs(r.H - h0));
    if (h0 == 0.0) return worst == 0.0 ? 0.0 : INFINITY;
    return worst / std::abs(h0);
}

std::optional<double> first_dominance_time(std::span<const EnergyRecord> records,
                                           const LyapunovParams& params) {
    for (const auto& r : records) {
        if (r.H >= 0.5 * std::pow(r.t, params.p() + 1.0) * r.a) return r.t;
    }
    return std::nullopt;
}

VelocityDecay velocity_decay_exponent(const Trajectory& traj, double t_lo, double t_hi) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) {
        throw std::invalid_argument("velocity window must satisfy 0 < t_lo < t_hi");
    }
    std::vector<double> t;
    std::vector<double> speed;
    for (const auto& r : traj.records) {
        if (r.t < t_lo || r.t > t_hi) continue;
        t.push_back(r.t);
        const double s = r.v.norm();
        speed.push_back(s < 1e-300 ? 0.0 : s);
    }
    if (t.empty()) throw std::invalid_argument("velocity window contains no records");

    VelocityDecay out;
    const auto env = log_bin_envelope(t, speed, t_lo, t_hi);
    if (env.empty()) {
        out.degenerate = true;
        return out;
    }
    if (env.size() < 2) throw std::invalid_argument("velocity window spans a single bin");
    std::vector<double> lx;
    std::vector<double> ly;
    for (const auto& p : env) {
        lx.push_back(std::log(p.t));
        ly.push_back(std::log(p.value));
    }
    const auto fit = fit_line(lx, ly);
    out.exponent = fit.slope;
    out.slope_stderr = fit.slope_stderr;
    out.n_points = fit.n;
    return out;
}

PathLength path_length(const Trajectory& traj) {
    PathLength out;
    if (traj.records.size() < 2) return out;
    const double cutoff = traj.records.back().t / 10.0;
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        const double step = (traj.records[i].x - traj.records[i - 1].x).norm();
        out.total += step;
        if (traj.records[i - 1].t >= cutoff) out.last_decade += step;
    }
    return out;
}

void write_energy_csv(std::span<const EnergyRecord> records, std::ostream& out) {
    out << "t,a,b,c,E,H,z\n";
    for (const auto& r : records) {
        out << detail::sig17(r.t) << ',' << detail::sig17(r.a) << ',' << detail::sig17(r.b) << ','
            << detail::sig17(r.c) << ',' << detail::sig17(r.E) << ',' << detail::sig17(r.H) << ','
            << detail::sig17(r.z) << '\n';
    }
}

} // namespace nesterov_rates
