#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace nesterov_rates {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Shape of the minimizer set X* of a catalog objective.
struct MinimizerSet {
    enum class Kind { point, ball, affine };
    Kind kind = Kind::point;
    Vector center;       // x* for point/affine, center of the ball otherwise
    double radius = 0.0; // ball only: X* = { x : |x - center| <= radius }
};

/// An objective F with its first-order oracle and catalog metadata.
///
/// Instances are immutable after construction; every member is a pure
/// function of its arguments, so a single ObjectiveSpec can be shared by
/// concurrent runs.
struct ObjectiveSpec {
    std::string name; // canonical spec string, e.g. "power:gamma=2,dim=1"
    int dim = 1;

    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    // argmin_z 0.5|z - y|^2 + h F(z); empty when F has no catalog prox.
    std::function<Vector(double, const Vector&)> prox;

    double f_star = 0.0;
    MinimizerSet minimizers;
    std::function<double(const Vector&)> distance_to_minset;

    double nominal_gamma = 1.0; // largest gamma with H1(gamma)
    double nominal_r = 2.0;     // smallest r with H2(r)

    // Label of the smooth piece containing x. The gradient is smooth inside
    // each piece; the ODE integrator splits steps that change the label.
    // Empty for globally smooth objectives.
    std::function<int(const Vector&)> piece;

    [[nodiscard]] bool has_prox() const { return static_cast<bool>(prox); }
    [[nodiscard]] const Vector& minimizer() const { return minimizers.center; }
    [[nodiscard]] double gap(const Vector& x) const { return value(x) - f_star; }
};

/// F(x) = |x|^gamma on R^dim.
ObjectiveSpec make_power(double gamma, int dim = 1);

/// F(x) = max(|x| - a, 0)^gamma, minimizer set the closed ball of radius a.
ObjectiveSpec make_plateau(double gamma, double a, int dim = 1);

/// F(x) = 0.5 |Ax - b|^2. The minimizer hint is the minimum-norm solution.
ObjectiveSpec make_least_squares(const Matrix& A, const Vector& b);

/// Reads [A|b] from a CSV file: m rows of n+1 numeric columns.
ObjectiveSpec load_least_squares_csv(const std::string& path);

/// Scalar prox of h|.|^gamma evaluated at y.
double prox_power(double gamma, double h, double y);

/// Builds an objective from its spec string:
///   power:gamma=1.5,dim=1   plateau:gamma=2,a=1   lsq:file=problem.csv
/// Throws std::invalid_argument on unknown families or keys.
ObjectiveSpec parse_objective(std::string_view spec);

/// Returns the spec string with `gamma` replaced (power/plateau families).
std::string with_gamma(std::string_view spec, double gamma);

// ---------------------------------------------------------------------------
// Geometry probes

enum class Hypothesis { H1, H2 };

struct GeometryProbeReport {
    Hypothesis hypothesis = Hypothesis::H1;
    double exponent = 0.0;
    double radius = 0.0;
    int n_samples = 0;
    double worst_margin = 0.0;          // min over samples of rhs - lhs
    double constant = 0.0;              // K for H2, unused for H1
    bool holds = true;
    std::optional<Vector> witness;      // set when violated
    double flatness_constant = 0.0;     // empirical M with gap <= M |x - x*|^exponent
};

inline constexpr double kProbeTolerance = 1e-10;

/// Tests F(x) - F* <= (1/gamma) <grad F(x), x - x*> on uniform samples of
/// the ball B(x*, radius).
GeometryProbeReport probe_H1(const ObjectiveSpec& obj, double gamma, const Vector& x_star,
                             double radius, int n_samples, std::uint64_t seed);

/// Tests K d(x, X*)^r <= F(x) - F* on uniform samples of B(x*, radius).
GeometryProbeReport probe_H2(const ObjectiveSpec& obj, double r, double K, const Vector& x_star,
                             double radius, int n_samples, std::uint64_t seed);

struct LipschitzGamma {
    double gamma = 1.0;
    bool out_of_range = false; // K > 2L: the (K, L) pair is inconsistent
};

/// H1 exponent implied by H2(2) with constant K and an L-Lipschitz gradient.
LipschitzGamma gamma_from_lipschitz(double K, double L);

/// Max relative error between the analytic gradient and central differences.
double check_gradient(const ObjectiveSpec& obj, const Vector& x, double delta);

/// Uniform sample in the ball B(center, radius); deterministic per generator state.
Vector sample_ball(const Vector& center, double radius, std::mt19937_64& rng);

} // namespace nesterov_rates
