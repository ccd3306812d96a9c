#include "nesterov_rates/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace nesterov_rates {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
    LineFit fit;
    fit.n = static_cast<int>(x.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - fit.intercept - fit.slope * x[i];
        fit.rss += r * r;
    }
    fit.slope_stderr = x.size() > 2 ? std::sqrt(fit.rss / (n - 2.0) / sxx) : 0.0;
    return fit;
}

std::vector<EnvelopePoint> log_bin_envelope(std::span<const double> t,
                                            std::span<const double> values, double t_lo,
                                            double t_hi, int bins) {
    if (t.size() != values.size()) throw std::invalid_argument("envelope: size mismatch");
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw std::invalid_argument("envelope: bad window");
    if (bins < 1) throw std::invalid_argument("envelope: need at least one bin");
    const double log_lo = std::log(t_lo);
    const double width = (std::log(t_hi) - log_lo) / bins;

    std::vector<EnvelopePoint> best(static_cast<std::size_t>(bins), EnvelopePoint{0.0, 0.0});
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_lo || t[i] > t_hi || !(values[i] > 0.0)) continue;
        auto b = static_cast<int>((std::log(t[i]) - log_lo) / width);
        b = std::min(std::max(b, 0), bins - 1);
        auto& slot = best[static_cast<std::size_t>(b)];
        if (values[i] > slot.value) slot = {t[i], values[i]};
    }
    std::vector<EnvelopePoint> out;
    for (const auto& p : best) {
        if (p.value > 0.0) out.push_back(p);
    }
    return out;
}

} // namespace nesterov_rates
