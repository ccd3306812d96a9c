#include "nesterov_rates/objective.hpp"

#include "text_util.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

namespace nesterov_rates {

namespace {

// Sign of the largest-magnitude coordinate. Constant on each half of a line
// through the origin, flips when the line crosses it.
int dominant_sign(const Vector& x) {
    if (x.size() == 0) return 0;
    Eigen::Index idx = 0;
    x.cwiseAbs().maxCoeff(&idx);
    return (x[idx] > 0.0) - (x[idx] < 0.0);
}

// Applies a scalar prox radially: direction y/|y|, magnitude prox(|y|).
template <class ScalarProx>
Vector radial(const Vector& y, ScalarProx&& scalar) {
    const double r = y.norm();
    if (r == 0.0) return Vector::Zero(y.size());
    return y * (scalar(r) / r);
}

using Params = std::map<std::string, std::string, std::less<>>;

std::pair<std::string, Params> split_spec(std::string_view spec) {
    auto colon = spec.find(':');
    std::string family(spec.substr(0, colon));
    Params params;
    if (colon != std::string_view::npos) {
        for (auto item : detail::split(spec.substr(colon + 1), ',')) {
            if (item.empty()) continue;
            auto eq = item.find('=');
            if (eq == std::string_view::npos) {
                throw std::invalid_argument("objective parameter without value: '" +
                                            std::string(item) + "'");
            }
            std::string key(item.substr(0, eq));
            if (!params.emplace(key, std::string(item.substr(eq + 1))).second) {
                throw std::invalid_argument("duplicate objective parameter '" + key + "'");
            }
        }
    }
    return {family, params};
}

void reject_unknown(const Params& params, std::initializer_list<std::string_view> known,
                    const std::string& family) {
    for (const auto& [key, _] : params) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw std::invalid_argument("unknown parameter '" + key + "' for objective '" +
                                        family + "'");
        }
    }
}

double required(const Params& params, const std::string& key, const std::string& family) {
    auto it = params.find(key);
    if (it == params.end()) {
        throw std::invalid_argument("objective '" + family + "' requires '" + key + "'");
    }
    return detail::parse_double(it->second, key);
}

int dim_param(const Params& params) {
    auto it = params.find("dim");
    if (it == params.end()) return 1;
    double d = detail::parse_double(it->second, "dim");
    if (d < 1 || d != std::floor(d)) throw std::invalid_argument("dim must be a positive integer");
    return static_cast<int>(d);
}

} // namespace

double prox_power(double gamma, double h, double y) {
    if (!(h > 0.0)) throw std::invalid_argument("prox_power: h must be positive");
    if (!(gamma >= 1.0)) throw std::invalid_argument("prox_power: gamma must be >= 1");
    if (y == 0.0) return 0.0;
    const double sign = y > 0.0 ? 1.0 : -1.0;
    const double target = std::abs(y);
    if (gamma == 1.0) return sign * std::max(target - h, 0.0);
    if (gamma == 2.0) return y / (1.0 + 2.0 * h);

    // u + h*gamma*u^(gamma-1) = |y| has a unique root in (0, |y|).
    auto residual = [&](double u) { return u + h * gamma * std::pow(u, gamma - 1.0) - target; };
    const double tol = 1e-14 * std::max(1.0, target);
    double lo = 0.0;
    double hi = target;
    // Start from the smaller of the two one-term approximations.
    double u = std::min(target, std::pow(target / (h * gamma), 1.0 / (gamma - 1.0)));
    double best = u;
    double best_res = std::abs(residual(u));
    for (int it = 0; it < 200 && best_res > tol; ++it) {
        const double f = residual(u);
        if (f > 0.0) hi = u; else lo = u;
        const double df = 1.0 + h * gamma * (gamma - 1.0) * std::pow(u, gamma - 2.0);
        double next = u - f / df;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (next == u) break;
        u = next;
        const double r = std::abs(residual(u));
        if (r < best_res) {
            best_res = r;
            best = u;
        }
        if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
    }
    return sign * best;
}

ObjectiveSpec make_power(double gamma, int dim) {
    if (!(gamma >= 1.0)) throw std::invalid_argument("power objective requires gamma >= 1");
    if (dim < 1) throw std::invalid_argument("power objective requires dim >= 1");
    ObjectiveSpec obj;
    obj.name = "power:gamma=" + detail::shortest(gamma) + ",dim=" + std::to_string(dim);
    obj.dim = dim;
    obj.value = [gamma](const Vector& x) { return std::pow(x.norm(), gamma); };
    obj.gradient = [gamma](const Vector& x) -> Vector {
        const double r = x.norm();
        if (r == 0.0) return Vector::Zero(x.size());
        return x * (gamma * std::pow(r, gamma - 2.0));
    };
    obj.prox = [gamma](double h, const Vector& y) {
        return radial(y, [&](double r) { return prox_power(gamma, h, r); });
    };
    obj.f_star = 0.0;
    obj.minimizers = {MinimizerSet::Kind::point, Vector::Zero(dim), 0.0};
    obj.distance_to_minset = [](const Vector& x) { return x.norm(); };
    obj.nominal_gamma = gamma;
    obj.nominal_r = gamma;
    if (gamma < 2.0) obj.piece = dominant_sign;
    return obj;
}

ObjectiveSpec make_plateau(double gamma, double a, int dim) {
    if (!(a > 0.0)) throw std::invalid_argument("plateau objective requires a > 0");
    if (!(gamma >= 1.0)) throw std::invalid_argument("plateau objective requires gamma >= 1");
    if (dim < 1) throw std::invalid_argument("plateau objective requires dim >= 1");
    ObjectiveSpec obj;
    obj.name = "plateau:gamma=" + detail::shortest(gamma) + ",a=" + detail::shortest(a);
    if (dim != 1) obj.name += ",dim=" + std::to_string(dim);
    obj.dim = dim;
    obj.value = [gamma, a](const Vector& x) {
        return std::pow(std::max(x.norm() - a, 0.0), gamma);
    };
    obj.gradient = [gamma, a](const Vector& x) -> Vector {
        const double r = x.norm();
        const double d = r - a;
        if (d <= 0.0) return Vector::Zero(x.size());
        return x * (gamma * std::pow(d, gamma - 1.0) / r);
    };
    obj.prox = [gamma, a](double h, const Vector& y) -> Vector {
        if (y.norm() <= a) return y;
        return radial(y, [&](double r) { return a + prox_power(gamma, h, r - a); });
    };
    obj.f_star = 0.0;
    obj.minimizers = {MinimizerSet::Kind::ball, Vector::Zero(dim), a};
    obj.distance_to_minset = [a](const Vector& x) { return std::max(x.norm() - a, 0.0); };
    obj.nominal_gamma = gamma;
    obj.nominal_r = gamma;
    obj.piece = [a](const Vector& x) { return x.norm() > a ? 1 : 0; };
    return obj;
}

ObjectiveSpec make_least_squares(const Matrix& A, const Vector& b) {
    if (A.rows() == 0 || A.cols() == 0 || A.isZero(0.0)) {
        throw std::invalid_argument("least squares objective requires a nonzero matrix");
    }
    if (b.size() != A.rows()) {
        throw std::invalid_argument("least squares: b must have one entry per row of A");
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    Vector x_star = cod.solve(b);
    const Matrix pinv = cod.pseudoInverse();
    const Matrix row_projector = pinv * A;
    const Matrix gram = A.transpose() * A;
    const Vector atb = A.transpose() * b;
    const double f_star = 0.5 * (A * x_star - b).squaredNorm();

    ObjectiveSpec obj;
    obj.name = "lsq:m=" + std::to_string(A.rows()) + ",n=" + std::to_string(A.cols());
    obj.dim = static_cast<int>(A.cols());
    obj.value = [A, b](const Vector& x) { return 0.5 * (A * x - b).squaredNorm(); };
    obj.gradient = [A, b](const Vector& x) -> Vector { return A.transpose() * (A * x - b); };
    obj.prox = [gram, atb](double h, const Vector& y) -> Vector {
        Matrix system = h * gram;
        system.diagonal().array() += 1.0;
        return system.llt().solve(y + h * atb);
    };
    obj.f_star = f_star;
    const bool full_rank = cod.rank() == A.cols();
    obj.minimizers = {full_rank ? MinimizerSet::Kind::point : MinimizerSet::Kind::affine, x_star,
                      0.0};
    obj.distance_to_minset = [row_projector, x_star](const Vector& x) {
        return (row_projector * (x - x_star)).norm();
    };
    obj.nominal_gamma = 2.0;
    obj.nominal_r = 2.0;
    return obj;
}

ObjectiveSpec load_least_squares_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open least squares file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        for (auto cell : detail::split(line, ',')) row.push_back(detail::parse_double(cell, path));
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::invalid_argument("ragged row in least squares file '" + path + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().size() < 2) {
        throw std::invalid_argument("least squares file needs at least one row of [A|b]");
    }
    const auto m = static_cast<Eigen::Index>(rows.size());
    const auto n = static_cast<Eigen::Index>(rows.front().size() - 1);
    Matrix A(m, n);
    Vector b(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) = rows[i][j];
        b[i] = rows[i][n];
    }
    auto obj = make_least_squares(A, b);
    obj.name = "lsq:file=" + path;
    return obj;
}

ObjectiveSpec parse_objective(std::string_view spec) {
    auto [family, params] = split_spec(spec);
    if (family == "power") {
        reject_unknown(params, {"gamma", "dim"}, family);
        return make_power(required(params, "gamma", family), dim_param(params));
    }
    if (family == "plateau") {
        reject_unknown(params, {"gamma", "a", "dim"}, family);
        return make_plateau(required(params, "gamma", family), required(params, "a", family),
                            dim_param(params));
    }
    if (family == "lsq") {
        reject_unknown(params, {"file"}, family);
        auto it = params.find("file");
        if (it == params.end()) throw std::invalid_argument("objective 'lsq' requires 'file'");
        return load_least_squares_csv(it->second);
    }
    throw std::invalid_argument("unknown objective family '" + family + "'");
}

std::string with_gamma(std::string_view spec, double gamma) {
    auto [family, params] = split_spec(spec);
    if (family != "power" && family != "plateau") {
        throw std::invalid_argument("objective '" + family + "' has no gamma parameter");
    }
    params["gamma"] = detail::shortest(gamma);
    std::string out = family + ":gamma=" + params["gamma"];
    for (const auto& [key, val] : params) {
        if (key != "gamma") out += "," + key + "=" + val;
    }
    return out;
}

// ---------------------------------------------------------------------------

Vector sample_ball(const Vector& center, double radius, std::mt19937_64& rng) {
    const auto n = center.size();
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector dir(n);
    double norm = 0.0;
    do {
        for (Eigen::Index i = 0; i < n; ++i) dir[i] = normal(rng);
        norm = dir.norm();
    } while (norm == 0.0);
    const double r = radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
    return center + dir * (r / norm);
}

namespace {

template <class Margin>
GeometryProbeReport run_probe(Hypothesis hyp, const ObjectiveSpec& obj, double exponent,
                              const Vector& x_star, double radius, int n_samples,
                              std::uint64_t seed, Margin&& margin_of) {
    if (!(radius > 0.0)) throw std::invalid_argument("probe radius must be positive");
    if (n_samples < 1) throw std::invalid_argument("probe needs at least one sample");
    if (x_star.size() != obj.dim) throw std::invalid_argument("probe center has wrong dimension");

    GeometryProbeReport report;
    report.hypothesis = hyp;
    report.exponent = exponent;
    report.radius = radius;
    report.n_samples = n_samples;
    report.worst_margin = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(seed);
    double worst_scaled = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_samples; ++i) {
        const Vector x = sample_ball(x_star, radius, rng);
        const double gap = obj.gap(x);
        const double margin = margin_of(x, gap);
        report.worst_margin = std::min(report.worst_margin, margin);
        const double scaled = margin / std::max(1.0, std::abs(gap));
        if (scaled < worst_scaled) {
            worst_scaled = scaled;
            if (scaled < -kProbeTolerance) report.witness = x;
        }
        const double dist = (x - x_star).norm();
        if (dist > 0.0) {
            report.flatness_constant =
                std::max(report.flatness_constant, gap / std::pow(dist, exponent));
        }
    }
    report.holds = worst_scaled >= -kProbeTolerance;
    if (report.holds) report.witness.reset();
    return report;
}

} // namespace

GeometryProbeReport probe_H1(const ObjectiveSpec& obj, double gamma, const Vector& x_star,
                             double radius, int n_samples, std::uint64_t seed) {
    if (!(gamma > 0.0)) throw std::invalid_argument("probe_H1: gamma must be positive");
    return run_probe(Hypothesis::H1, obj, gamma, x_star, radius, n_samples, seed,
                     [&](const Vector& x, double gap) {
                         return obj.gradient(x).dot(x - x_star) / gamma - gap;
                     });
}

GeometryProbeReport probe_H2(const ObjectiveSpec& obj, double r, double K, const Vector& x_star,
                             double radius, int n_samples, std::uint64_t seed) {
    if (!(K > 0.0)) throw std::invalid_argument("probe_H2: K must be positive");
    if (!(r > 0.0)) throw std::invalid_argument("probe_H2: r must be positive");
    auto report = run_probe(Hypothesis::H2, obj, r, x_star, radius, n_samples, seed,
                            [&](const Vector& x, double gap) {
                                return gap - K * std::pow(obj.distance_to_minset(x), r);
                            });
    report.constant = K;
    return report;
}

LipschitzGamma gamma_from_lipschitz(double K, double L) {
    if (!(K > 0.0) || !(L > 0.0)) {
        throw std::invalid_argument("gamma_from_lipschitz: K and L must be positive");
    }
    return {1.0 + K / (2.0 * L), K > 2.0 * L};
}

double check_gradient(const ObjectiveSpec& obj, const Vector& x, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("check_gradient: delta must be positive");
    const Vector g = obj.gradient(x);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    double worst = 0.0;
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + delta;
        const double up = obj.value(probe);
        probe[i] = x[i] - delta;
        const double down = obj.value(probe);
        probe[i] = x[i];
        const double fd = (up - down) / (2.0 * delta);
        worst = std::max(worst, std::abs(fd - g[i]) / scale);
    }
    return worst;
}

} // namespace nesterov_rates
