#pragma once

#include "nesterov_rates/config.hpp"
#include "nesterov_rates/objective.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nesterov_rates {

/// Raised when a step produces a non-finite state.
class NonFiniteState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// State of the inertial scheme. Zero initial velocity: x_prev == x_curr at n = 0.
struct SchemeState {
    long long n = 0;
    Vector x_curr;
    Vector x_prev;
    double alpha = 3.0;
    double h = 1e-5;
};

struct OdeState {
    double t = 1.0;
    Vector x;
    Vector v;
};

/// y = x_n + n/(n+alpha) (x_n - x_{n-1});  x_{n+1} = y - h grad F(y).
SchemeState nesterov_step(const SchemeState& state, const ObjectiveSpec& obj);

/// Same extrapolation, x_{n+1} = prox_{hF}(y).
SchemeState prox_nesterov_step(const SchemeState& state, const ObjectiveSpec& obj);

/// One classical RK4 step of x' = v, v' = -(alpha/t) v - grad F(x).
///
/// When the objective labels its smooth pieces, steps that pass close to a
/// piece boundary are halved recursively (sub-step length proportional to
/// the distance from the boundary) and the finest sub-step is split at the
/// crossing, so that no RK4 stage straddles a gradient singularity.
OdeState ode_rk4_step(const OdeState& state, const ObjectiveSpec& obj, double alpha, double dt);

struct TrajectoryRecord {
    long long n = 0; // step index
    double t = 0.0;
    Vector x;
    Vector v;
    double gap = 0.0;
};

struct Trajectory {
    Mode mode = Mode::nesterov;
    std::string objective;
    double alpha = 0.0;
    double step = 0.0; // h for schemes, dt for the integrator
    double t0 = 0.0;   // integrator start; 0 for schemes
    long long stride = 1;
    std::vector<TrajectoryRecord> records;
    std::optional<std::string> error; // set when the run stopped early

    [[nodiscard]] bool ok() const { return !error.has_value(); }
    [[nodiscard]] int dim() const {
        return records.empty() ? 0 : static_cast<int>(records.front().x.size());
    }
};

/// Time of step n: n sqrt(h) for schemes, t0 + n dt for the integrator.
double record_time(Mode mode, long long n, double step, double t0);

/// The integrator's effective start time max(t0, dt).
double integrator_start(double t0, double dt);

/// Resolves the configured or automatic mode for an objective.
Mode resolve_mode(const ExperimentConfig& config, const ObjectiveSpec& obj);

/// Simulates `config.steps` steps. First and last states are always recorded.
/// Throws std::invalid_argument for configurations that cannot start; step
/// failures end the run early with `error` set and the partial records kept.
Trajectory run(const ExperimentConfig& config, const ObjectiveSpec& obj);

/// Header `n,t,x_0..x_{d-1},v_0..v_{d-1},gap`, 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

} // namespace nesterov_rates
