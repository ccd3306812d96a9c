#pragma once

#include <span>
#include <vector>

namespace nesterov_rates {

/// Ordinary least squares y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double rss = 0.0; // residual sum of squares
    int n = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct EnvelopePoint {
    double t;
    double value;
};

/// Upper envelope of an oscillating positive signal on [t_lo, t_hi]: the
/// window is cut into `bins` log-spaced bins and each non-empty bin
/// contributes its maximum (at the time it is attained). Non-positive
/// values are ignored.
std::vector<EnvelopePoint> log_bin_envelope(std::span<const double> t,
                                            std::span<const double> values, double t_lo,
                                            double t_hi, int bins = 30);

} // namespace nesterov_rates
