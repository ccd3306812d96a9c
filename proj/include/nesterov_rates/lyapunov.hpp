#pragma once

#include "nesterov_rates/dynamics.hpp"
#include "nesterov_rates/fit.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace nesterov_rates {

enum class Regime { sharp, flat, manual };

const char* to_string(Regime regime);

/// Parameters of E(t) = t^2 gap + |lambda (x - x*) + t v|^2 / 2 + xi |x - x*|^2 / 2
/// and H(t) = t^p E(t). xi is always lambda (lambda + 1 - alpha).
class LyapunovParams {
public:
    /// Sharp: lambda = 2 alpha/(gamma+2), p = 2 gamma alpha/(gamma+2) - 2.
    static LyapunovParams sharp(double alpha, double gamma);
    /// Flat (gamma > 2): lambda = 2/(gamma-2), p = 4/(gamma-2).
    static LyapunovParams flat(double alpha, double gamma);
    static LyapunovParams manual(double alpha, double gamma, double lambda, double p);

    [[nodiscard]] double lambda() const { return lambda_; }
    [[nodiscard]] double xi() const { return xi_; }
    [[nodiscard]] double p() const { return p_; }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double gamma() const { return gamma_; }
    [[nodiscard]] Regime regime() const { return regime_; }

    /// Coefficient of t^p c(t) in H'(t); equals xi (p - 2 lambda).
    [[nodiscard]] double K1() const { return K1_; }
    /// Coefficient of t^p a(t) in H'(t): 2 - gamma lambda + p.
    [[nodiscard]] double coeff_a() const { return 2.0 - gamma_ * lambda_ + p_; }
    /// Coefficient of t^p b(t) in H'(t): 2 lambda + 2 - 2 alpha + p.
    [[nodiscard]] double coeff_b() const { return 2.0 * lambda_ + 2.0 - 2.0 * alpha_ + p_; }

private:
    LyapunovParams(double alpha, double gamma, double lambda, double p, Regime regime);

    double alpha_ = 0.0;
    double gamma_ = 0.0;
    double lambda_ = 0.0;
    double xi_ = 0.0;
    double p_ = 0.0;
    double K1_ = 0.0;
    Regime regime_ = Regime::manual;
};

/// Closed form 4 alpha gamma/(gamma+2)^3 (1 + 2/gamma - alpha)(alpha (gamma-2) - gamma - 2).
double sharp_K1(double alpha, double gamma);

/// Picks the regime from the hint, or from (alpha, gamma) when absent:
/// flat when gamma > 2 and alpha >= (gamma+2)/(gamma-2), sharp otherwise.
/// Throws std::invalid_argument for a flat request with gamma <= 2.
LyapunovParams select_params(double alpha, double gamma1, std::optional<Regime> hint = {});

struct EnergyRecord {
    double t = 0.0;
    double a = 0.0; // t gap
    double b = 0.0; // |lambda (x - x*) + t v|^2 / (2t)
    double c = 0.0; // |x - x*|^2 / (2t)
    double E = 0.0;
    double H = 0.0;
    double z = 0.0; // gap t^rate
};

/// Energies at every record with t > 0.
std::vector<EnergyRecord> energy_along(const Trajectory& traj, const LyapunovParams& params,
                                       const Vector& x_star, double rate);

enum class Direction { nonincreasing, nondecreasing };

struct MonotoneVerdict {
    bool holds = true;
    double worst_violation = 0.0; // largest scaled step against the direction (<= 0 if none)
    double t_from = 0.0;
    double t_to = 0.0;
};

inline constexpr double kMonotoneTolerance = 1e-9;

/// Successive H differences against `direction`, scaled by max(1, |H|).
MonotoneVerdict check_H_monotone(std::span<const EnergyRecord> records, Direction direction,
                                 double tol = kMonotoneTolerance);

struct HPrimeCheck {
    double max_relative_residual = 0.0;
    double t_worst = 0.0;
    int n_points = 0;
    bool derivative_vanishes = false; // closed form identically zero
};

/// Central differences of H against the exact derivative for F = |x|^gamma,
///   H'(t) = t^p ((2 - gamma lambda + p) a + (2 lambda + 2 - 2 alpha + p) b + xi (p - 2 lambda) c),
/// which collapses to K1 t^p c(t) for sharp parameters. Residuals are scaled
/// by the largest |H'| within `scale_window` time units of the point; when the
/// closed form vanishes identically they are scaled by |H|/t instead.
/// Only integrator trajectories are accepted.
HPrimeCheck check_Hprime_closed_form(const Trajectory& traj, const LyapunovParams& params,
                                     double gamma, const Vector& x_star,
                                     double scale_window = 1.0);

/// max |H(t) - H(t_first)| / |H(t_first)|.
double relative_energy_drift(std::span<const EnergyRecord> records);

/// First record where H >= t^{p+1} a / 2, if any.
std::optional<double> first_dominance_time(std::span<const EnergyRecord> records,
                                           const LyapunovParams& params);

struct VelocityDecay {
    bool degenerate = false; // every velocity vanishes in the window
    double exponent = 0.0;   // log-log slope of the |v| envelope
    double slope_stderr = 0.0;
    int n_points = 0;
};

/// Slope of the log-binned running max of |v| against log t on [t_lo, t_hi].
VelocityDecay velocity_decay_exponent(const Trajectory& traj, double t_lo, double t_hi);

/// Sum of |x_{k+1} - x_k| over the records, and the share of it accrued after
/// t_end / 10.
struct PathLength {
    double total = 0.0;
    double last_decade = 0.0;
    [[nodiscard]] double last_decade_fraction() const {
        return total > 0.0 ? last_decade / total : 0.0;
    }
};

PathLength path_length(const Trajectory& traj);

/// Header `t,a,b,c,E,H,z`, 17 significant digits.
void write_energy_csv(std::span<const EnergyRecord> records, std::ostream& out);

} // namespace nesterov_rates
