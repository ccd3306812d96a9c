#include "nesterov_rates/rates.hpp"

#include "nesterov_rates/fit.hpp"
#include "text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace nesterov_rates {

const char* to_string(Branch branch) {
    switch (branch) {
    case Branch::sharp_subcritical: return "sharp-subcritical";
    case Branch::flat_saturated: return "flat-saturated";
    case Branch::flat_intermediate: return "flat-intermediate";
    }
    return "sharp-subcritical";
}

RateRegime theoretical_rate(double alpha, double gamma) {
    if (!(alpha > 0.0)) throw std::invalid_argument("theoretical_rate: alpha must be positive");
    if (!(gamma >= 1.0)) throw std::invalid_argument("theoretical_rate: gamma must be >= 1");
    RateRegime r;
    r.alpha = alpha;
    r.gamma = gamma;
    const double sharp = 2.0 * alpha * gamma / (gamma + 2.0);
    if (gamma <= 2.0 || alpha <= 1.0 + 2.0 / gamma) {
        r.branch = Branch::sharp_subcritical;
        r.exponent = sharp;
        // Matching lower bounds are known for 1 < gamma <= 2 only.
        r.lower_bound_proven = gamma > 1.0 && gamma <= 2.0;
    } else if (alpha >= (gamma + 2.0) / (gamma - 2.0)) {
        r.branch = Branch::flat_saturated;
        r.exponent = 2.0 * gamma / (gamma - 2.0);
    } else {
        r.branch = Branch::flat_intermediate;
        r.exponent = sharp;
        r.upper_bound_proven = false;
    }
    return r;
}

namespace {

struct PositiveTimes {
    std::vector<double> t;
    std::vector<double> gap;
};

PositiveTimes positive_records(const Trajectory& traj) {
    PositiveTimes out;
    for (const auto& r : traj.records) {
        if (r.t > 0.0) {
            out.t.push_back(r.t);
            out.gap.push_back(r.gap);
        }
    }
    return out;
}

// Time at fraction f of the log-time span [t.front(), t.back()].
double log_fraction(std::span<const double> t, double f) {
    const double lo = std::log(t.front());
    return std::exp(lo + f * (std::log(t.back()) - lo));
}

} // namespace

ExponentFit fit_exponent(std::span<const double> t, std::span<const double> gap, double lo,
                         double hi) {
    if (t.size() != gap.size()) throw std::invalid_argument("fit_exponent: size mismatch");
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
        throw std::invalid_argument("fit_exponent: window must satisfy 0 <= lo < hi <= 1");
    }
    if (t.size() < 2 || !(t.front() > 0.0)) {
        throw std::invalid_argument("fit_exponent: need at least two records with t > 0");
    }
    ExponentFit fit;
    fit.t_lo = log_fraction(t, lo);
    fit.t_hi = log_fraction(t, hi);
    // Guard the end points against rounding in exp(log(.)).
    if (hi == 1.0) fit.t_hi = t.back();
    if (lo == 0.0) fit.t_lo = t.front();

    int usable = 0;
    int in_window = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < fit.t_lo || t[i] > fit.t_hi) continue;
        ++in_window;
        if (gap[i] > 0.0) ++usable;
    }
    if (in_window > 0 && usable == 0) {
        fit.degenerate = true;
        return fit;
    }
    if (usable < 10) {
        throw std::invalid_argument("fit_exponent: fewer than 10 records with positive gap in "
                                    "the window");
    }

    const auto env = log_bin_envelope(t, gap, fit.t_lo, fit.t_hi, 30);
    std::vector<double> log_t;
    std::vector<double> lin_t;
    std::vector<double> log_g;
    for (const auto& p : env) {
        log_t.push_back(std::log(p.t));
        lin_t.push_back(p.t);
        log_g.push_back(std::log(p.value));
    }
    if (env.size() < 3) throw std::invalid_argument("fit_exponent: envelope has < 3 points");
    const auto loglog = fit_line(log_t, log_g);
    const auto loglin = fit_line(lin_t, log_g);
    fit.exponent = -loglog.slope;
    fit.exponent_err = loglog.slope_stderr;
    fit.n_points = loglog.n;
    fit.rss_loglog = loglog.rss;
    fit.rss_loglinear = loglin.rss;
    return fit;
}

ExponentFit fit_exponent(const Trajectory& traj, double lo, double hi) {
    const auto pos = positive_records(traj);
    return fit_exponent(pos.t, pos.gap, lo, hi);
}

ZSequence z_sequence(std::span<const double> t, std::span<const double> gap, double exponent) {
    if (!std::isfinite(exponent)) throw std::invalid_argument("z_sequence: exponent not finite");
    if (t.size() != gap.size()) throw std::invalid_argument("z_sequence: size mismatch");
    ZSequence out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0)) continue;
        out.t.push_back(t[i]);
        out.z.push_back(std::max(gap[i], 0.0) * std::pow(t[i], exponent));
    }
    out.raw_max = out.z.empty() ? 0.0 : *std::max_element(out.z.begin(), out.z.end());
    if (!(out.raw_max > 0.0)) {
        out.degenerate = true;
        return out;
    }
    for (auto& z : out.z) z /= out.raw_max;
    return out;
}

ZSequence z_sequence(const Trajectory& traj, double exponent) {
    const auto pos = positive_records(traj);
    return z_sequence(pos.t, pos.gap, exponent);
}

RateVerdict verify_rate(std::span<const double> t, std::span<const double> gap,
                        const RateRegime& regime, const ZThresholds& thresholds) {
    RateVerdict v;
    v.regime = regime;
    const auto z = z_sequence(t, gap, regime.exponent);
    if (z.degenerate) {
        v.degenerate = true;
        return v;
    }
    v.tail_t_lo = log_fraction(z.t, 0.5);
    v.tail_t_hi = z.t.back();
    if (v.tail_t_hi < 10.0 * v.tail_t_lo) {
        throw std::invalid_argument("verify_rate: the tail half spans less than one decade in t");
    }
    v.fit = fit_exponent(z.t, std::span<const double>(gap).last(z.t.size()), 0.5, 1.0);
    v.degenerate = v.fit.degenerate;

    v.z_global_max = z.raw_max;
    for (std::size_t i = 0; i < z.t.size(); ++i) {
        if (z.t[i] >= v.tail_t_lo) v.z_tail_max = std::max(v.z_tail_max, z.z[i]);
        else v.z_head_max = std::max(v.z_head_max, z.z[i]);
    }
    v.z_tail_ratio = v.z_tail_max; // global max is 1 after normalization
    v.boundedness = v.z_tail_max <= thresholds.boundedness_slack * v.z_head_max;
    v.nonvanishing = v.z_tail_ratio >= thresholds.nonvanishing_ratio;
    return v;
}

RateVerdict verify_rate(const Trajectory& traj, const RateRegime& regime,
                        const ZThresholds& thresholds) {
    const auto pos = positive_records(traj);
    return verify_rate(pos.t, pos.gap, regime, thresholds);
}

std::string verdict_json(const RateVerdict& v, const std::string& objective) {
    nlohmann::ordered_json j;
    j["objective"] = objective;
    j["alpha"] = v.regime.alpha;
    j["gamma"] = v.regime.gamma;
    j["branch"] = to_string(v.regime.branch);
    j["theoretical"] = v.regime.exponent;
    j["fitted"] = v.fit.exponent;
    j["fitted_err"] = v.fit.exponent_err;
    j["z_global_max"] = v.z_global_max;
    j["z_tail_ratio"] = v.z_tail_ratio;
    j["boundedness"] = v.boundedness;
    j["nonvanishing"] = v.nonvanishing;
    j["upper_bound"] = v.regime.upper_bound_proven ? "proven" : "unproven";
    j["lower_bound"] = v.regime.lower_bound_proven ? "proven" : "unproven";
    j["window"] = {v.tail_t_lo, v.tail_t_hi};
    j["degenerate"] = v.degenerate;
    j["passed"] = v.passed();
    return j.dump(2);
}

void write_z_csv(const ZSequence& z, std::ostream& out) {
    out << "t,z\n";
    for (std::size_t i = 0; i < z.t.size(); ++i) {
        out << detail::sig17(z.t[i]) << ',' << detail::sig17(z.z[i]) << '\n';
    }
}

} // namespace nesterov_rates
