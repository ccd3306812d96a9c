#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nesterov_rates {

enum class Mode { nesterov, prox_nesterov, ode_rk4 };

enum class LyapunovChoice { auto_sharp, auto_flat, manual };

/// Full description of one run.
struct ExperimentConfig {
    std::string objective = "power:gamma=2,dim=1";
    double alpha = 3.0;
    std::optional<Mode> mode; // unset: prox-nesterov when gamma < 2, else nesterov
    double h = 1e-5;          // scheme step
    double dt = 1e-4;         // integrator step
    double t0 = 1.0;          // integrator start time
    long long steps = 1000000;
    std::vector<double> x0{0.5};
    std::vector<double> v0{}; // integrator only; empty means zero
    long long stride = 100;
    std::optional<double> rate_override;
    LyapunovChoice lyapunov = LyapunovChoice::auto_sharp;
    double manual_lambda = 0.0; // LyapunovChoice::manual only
    double manual_p = 0.0;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::string label; // output subdirectory; derived from alpha/gamma when empty

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Grid of (alpha, gamma) cells sharing every other setting.
struct GridSpec {
    ExperimentConfig base;
    std::vector<std::pair<double, double>> cells; // (alpha, gamma)
    int parallelism = 0; // 0: environment variable or hardware concurrency
    bool svg = true;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& text);
const char* to_string(LyapunovChoice choice);

} // namespace nesterov_rates
