#pragma once

#include "nesterov_rates/dynamics.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nesterov_rates {

enum class Branch { sharp_subcritical, flat_saturated, flat_intermediate };

const char* to_string(Branch branch);

/// Theoretical decay exponent of F(x(t)) - F* for F ~ |x|^gamma.
struct RateRegime {
    double alpha = 0.0;
    double gamma = 0.0;
    Branch branch = Branch::sharp_subcritical;
    double exponent = 0.0;
    // Whether gap * t^exponent is known to stay bounded / not to vanish.
    bool upper_bound_proven = true;
    bool lower_bound_proven = true;
};

///   2 alpha gamma/(gamma+2)  if gamma <= 2, or gamma > 2 and alpha <= 1 + 2/gamma
///   2 gamma/(gamma-2)        if gamma > 2 and alpha >= (gamma+2)/(gamma-2)
///   2 alpha gamma/(gamma+2)  otherwise (lower bound only)
RateRegime theoretical_rate(double alpha, double gamma);

struct ExponentFit {
    bool degenerate = false; // every gap in the window is zero
    double exponent = 0.0;   // minus the log-log slope of the gap envelope
    double exponent_err = 0.0;
    int n_points = 0;        // envelope points used
    double t_lo = 0.0;
    double t_hi = 0.0;
    double rss_loglog = 0.0;    // log envelope vs log t
    double rss_loglinear = 0.0; // log envelope vs t (exponential model)
};

/// Decay exponent over the fraction window [lo, hi] of the log-time span of
/// the records with t > 0 (default: the last half).
ExponentFit fit_exponent(const Trajectory& traj, double lo = 0.5, double hi = 1.0);
ExponentFit fit_exponent(std::span<const double> t, std::span<const double> gap, double lo = 0.5,
                         double hi = 1.0);

struct ZSequence {
    bool degenerate = false;
    std::vector<double> t;
    std::vector<double> z; // normalized, max 1
    double raw_max = 0.0;
};

/// z = gap t^exponent on records with t > 0, rescaled so that max z = 1.
ZSequence z_sequence(const Trajectory& traj, double exponent);
ZSequence z_sequence(std::span<const double> t, std::span<const double> gap, double exponent);

struct ZThresholds {
    double boundedness_slack = 1.05;
    double nonvanishing_ratio = 0.05;
};

struct RateVerdict {
    RateRegime regime;
    ExponentFit fit;
    double z_global_max = 0.0; // before normalization
    double z_head_max = 0.0;   // normalized max before the tail window
    double z_tail_max = 0.0;   // normalized max over the tail window
    double z_tail_ratio = 0.0; // tail max / global max
    double tail_t_lo = 0.0;
    double tail_t_hi = 0.0;
    bool boundedness = false;
    bool nonvanishing = false;
    bool degenerate = false;

    /// Only the bounds proven for this branch are asserted.
    [[nodiscard]] bool passed() const {
        if (degenerate) return false;
        return (!regime.upper_bound_proven || boundedness) &&
               (!regime.lower_bound_proven || nonvanishing);
    }
};

/// Fit plus z statistics over the last half of the log-time span.
/// Throws std::invalid_argument when that tail spans less than a decade.
RateVerdict verify_rate(const Trajectory& traj, const RateRegime& regime,
                        const ZThresholds& thresholds = {});
RateVerdict verify_rate(std::span<const double> t, std::span<const double> gap,
                        const RateRegime& regime, const ZThresholds& thresholds = {});

/// {objective, alpha, gamma, branch, theoretical, fitted, fitted_err, z_global_max,
///  z_tail_ratio, boundedness, nonvanishing, ...}
std::string verdict_json(const RateVerdict& verdict, const std::string& objective);

/// Header `t,z`, 17 significant digits.
void write_z_csv(const ZSequence& z, std::ostream& out);

} // namespace nesterov_rates
