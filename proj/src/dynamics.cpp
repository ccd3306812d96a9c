#include "nesterov_rates/dynamics.hpp"

#include "text_util.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace nesterov_rates {

namespace {

void require_finite(const Vector& v, const char* what, long long n) {
    if (!v.allFinite()) {
        throw NonFiniteState(std::string("non-finite ") + what + " at step " + std::to_string(n));
    }
}

Vector extrapolate(const SchemeState& s) {
    const double beta = static_cast<double>(s.n) / (static_cast<double>(s.n) + s.alpha);
    return s.x_curr + beta * (s.x_curr - s.x_prev);
}

void check_scheme(const SchemeState& s) {
    if (!(s.h > 0.0)) throw std::invalid_argument("scheme step h must be positive");
    if (!(s.alpha > 0.0)) throw std::invalid_argument("damping alpha must be positive");
}

SchemeState advance(const SchemeState& s, Vector next) {
    SchemeState out;
    out.n = s.n + 1;
    out.x_prev = s.x_curr;
    out.x_curr = std::move(next);
    out.alpha = s.alpha;
    out.h = s.h;
    return out;
}

OdeState rk4_plain(const OdeState& s, const ObjectiveSpec& obj, double alpha, double dt) {
    auto accel = [&](double t, const Vector& x, const Vector& v) -> Vector {
        return -(alpha / t) * v - obj.gradient(x);
    };
    const double half = 0.5 * dt;
    const Vector k1x = s.v;
    const Vector k1v = accel(s.t, s.x, s.v);
    const Vector x2 = s.x + half * k1x;
    const Vector v2 = s.v + half * k1v;
    const Vector k2v = accel(s.t + half, x2, v2);
    const Vector x3 = s.x + half * v2;
    const Vector v3 = s.v + half * k2v;
    const Vector k3v = accel(s.t + half, x3, v3);
    const Vector x4 = s.x + dt * v3;
    const Vector v4 = s.v + dt * k3v;
    const Vector k4v = accel(s.t + dt, x4, v4);

    OdeState out;
    out.t = s.t + dt;
    out.x = s.x + (dt / 6.0) * (k1x + 2.0 * v2 + 2.0 * v3 + v4);
    out.v = s.v + (dt / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    return out;
}

// Split one step at the first piece change (located by bisection), so that
// no RK4 stage straddles the kink.
OdeState rk4_split(const OdeState& s, const ObjectiveSpec& obj, double alpha, double dt,
                   int depth) {
    OdeState full = rk4_plain(s, obj, alpha, dt);
    const int start_piece = obj.piece(s.x);
    if (depth > 4 || obj.piece(full.x) == start_piece) return full;
    double lo = 0.0;
    double hi = dt;
    for (int it = 0; it < 80 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * dt;
         ++it) {
        const double mid = 0.5 * (lo + hi);
        if (obj.piece(rk4_plain(s, obj, alpha, mid).x) == start_piece) lo = mid;
        else hi = mid;
    }
    OdeState crossed = rk4_plain(s, obj, alpha, hi);
    if (dt - hi <= 0.0) return crossed;
    OdeState out = rk4_split(crossed, obj, alpha, dt - hi, depth + 1);
    out.t = s.t + dt;
    return out;
}

constexpr double kKinkReach = 16.0; // steps of linear extrapolation scanned for a kink
constexpr int kMaxHalvings = 14;

// The derivatives of the gradient blow up near a kink, so steps whose
// neighbourhood reaches another piece are halved recursively. The resulting
// sub-step length is proportional to the distance from the kink.
OdeState rk4_piecewise(const OdeState& s, const ObjectiveSpec& obj, double alpha, double dt,
                       int halvings) {
    if (!obj.piece) return rk4_plain(s, obj, alpha, dt);
    const int here = obj.piece(s.x);
    const Vector reach = (kKinkReach * dt) * s.v;
    const bool near = obj.piece(s.x + reach) != here || obj.piece(s.x - reach) != here;
    if (!near) {
        OdeState full = rk4_plain(s, obj, alpha, dt);
        if (obj.piece(full.x) == here) return full;
    }
    if (halvings >= kMaxHalvings) return rk4_split(s, obj, alpha, dt, 0);
    const double half = 0.5 * dt;
    OdeState mid = rk4_piecewise(s, obj, alpha, half, halvings + 1);
    mid.t = s.t + half;
    OdeState out = rk4_piecewise(mid, obj, alpha, dt - half, halvings + 1);
    out.t = s.t + dt;
    return out;
}

} // namespace

SchemeState nesterov_step(const SchemeState& state, const ObjectiveSpec& obj) {
    check_scheme(state);
    const Vector y = extrapolate(state);
    const Vector g = obj.gradient(y);
    require_finite(g, "gradient", state.n);
    Vector next = y - state.h * g;
    require_finite(next, "iterate", state.n);
    return advance(state, std::move(next));
}

SchemeState prox_nesterov_step(const SchemeState& state, const ObjectiveSpec& obj) {
    check_scheme(state);
    if (!obj.has_prox()) throw std::invalid_argument("objective '" + obj.name + "' has no prox");
    Vector next = obj.prox(state.h, extrapolate(state));
    require_finite(next, "prox", state.n);
    return advance(state, std::move(next));
}

OdeState ode_rk4_step(const OdeState& state, const ObjectiveSpec& obj, double alpha, double dt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("damping alpha must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("integrator step dt must be positive");
    if (!(state.t > 0.0) || dt > state.t) {
        throw std::invalid_argument("integrator requires 0 < dt <= t");
    }
    OdeState out = rk4_piecewise(state, obj, alpha, dt, 0);
    if (!out.x.allFinite() || !out.v.allFinite()) {
        throw NonFiniteState("non-finite integrator state at t = " + detail::sig17(state.t));
    }
    return out;
}

double record_time(Mode mode, long long n, double step, double t0) {
    if (mode == Mode::ode_rk4) return t0 + static_cast<double>(n) * step;
    return static_cast<double>(n) * std::sqrt(step);
}

double integrator_start(double t0, double dt) { return std::max(t0, dt); }

Mode resolve_mode(const ExperimentConfig& config, const ObjectiveSpec& obj) {
    if (config.mode) return *config.mode;
    return obj.nominal_gamma < 2.0 && obj.has_prox() ? Mode::prox_nesterov : Mode::nesterov;
}

Trajectory run(const ExperimentConfig& config, const ObjectiveSpec& obj) {
    if (!(config.alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (config.steps < 1) throw std::invalid_argument("steps must be >= 1");
    if (config.stride < 1) throw std::invalid_argument("stride must be >= 1");

    auto to_point = [&](const std::vector<double>& values, const char* what) -> Vector {
        if (values.empty()) return Vector::Zero(obj.dim);
        if (values.size() == 1) return Vector::Constant(obj.dim, values.front());
        if (static_cast<int>(values.size()) != obj.dim) {
            throw std::invalid_argument(std::string(what) + " has " +
                                        std::to_string(values.size()) +
                                        " entries, objective dimension is " +
                                        std::to_string(obj.dim));
        }
        return Eigen::Map<const Vector>(values.data(), obj.dim);
    };

    Trajectory traj;
    traj.mode = resolve_mode(config, obj);
    traj.objective = obj.name;
    traj.alpha = config.alpha;
    traj.stride = config.stride;

    const Vector x0 = to_point(config.x0, "x0");
    auto keep = [&](long long n) { return n % config.stride == 0 || n == config.steps; };

    if (traj.mode == Mode::ode_rk4) {
        if (!(config.dt > 0.0)) throw std::invalid_argument("dt must be positive");
        if (!(config.t0 > 0.0)) throw std::invalid_argument("integrator t0 must be positive");
        traj.step = config.dt;
        traj.t0 = integrator_start(config.t0, config.dt);
        OdeState s{traj.t0, x0, to_point(config.v0, "v0")};
        traj.records.push_back({0, s.t, s.x, s.v, obj.gap(s.x)});
        for (long long k = 1; k <= config.steps; ++k) {
            try {
                s = ode_rk4_step(s, obj, config.alpha, config.dt);
            } catch (const NonFiniteState& e) {
                traj.error = e.what();
                break;
            }
            s.t = record_time(Mode::ode_rk4, k, config.dt, traj.t0);
            if (keep(k)) traj.records.push_back({k, s.t, s.x, s.v, obj.gap(s.x)});
        }
        return traj;
    }

    if (!(config.h > 0.0)) throw std::invalid_argument("h must be positive");
    if (traj.mode == Mode::prox_nesterov && !obj.has_prox()) {
        throw std::invalid_argument("mode prox-nesterov requires an objective with a prox");
    }
    if (!config.v0.empty()) {
        throw std::invalid_argument("v0 applies to the integrator only; schemes start at rest");
    }
    traj.step = config.h;
    const double sqrt_h = std::sqrt(config.h);
    SchemeState s{0, x0, x0, config.alpha, config.h};
    traj.records.push_back({0, 0.0, s.x_curr, Vector::Zero(obj.dim), obj.gap(s.x_curr)});
    const bool use_prox = traj.mode == Mode::prox_nesterov;
    for (long long n = 1; n <= config.steps; ++n) {
        try {
            s = use_prox ? prox_nesterov_step(s, obj) : nesterov_step(s, obj);
        } catch (const NonFiniteState& e) {
            traj.error = e.what();
            break;
        }
        if (keep(n)) {
            traj.records.push_back({n, record_time(traj.mode, n, config.h, 0.0), s.x_curr,
                                    (s.x_curr - s.x_prev) / sqrt_h, obj.gap(s.x_curr)});
        }
    }
    return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    const int d = traj.dim();
    out << "n,t";
    for (int i = 0; i < d; ++i) out << ",x_" << i;
    for (int i = 0; i < d; ++i) out << ",v_" << i;
    out << ",gap\n";
    for (const auto& r : traj.records) {
        out << r.n << ',' << detail::sig17(r.t);
        for (int i = 0; i < d; ++i) out << ',' << detail::sig17(r.x[i]);
        for (int i = 0; i < d; ++i) out << ',' << detail::sig17(r.v[i]);
        out << ',' << detail::sig17(r.gap) << '\n';
    }
}

} // namespace nesterov_rates
