#pragma once

#include "nesterov_rates/config.hpp"
#include "nesterov_rates/lyapunov.hpp"
#include "nesterov_rates/rates.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nesterov_rates {

/// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ParsedConfig {
    std::variant<ExperimentConfig, GridSpec> value;
    std::vector<std::string> warnings;

    [[nodiscard]] bool is_grid() const { return std::holds_alternative<GridSpec>(value); }
};

/// Parses a JSON config document. A document with a top-level "grid" object
/// is a GridSpec whose remaining keys form the shared base config. Unknown
/// keys are rejected. Defaults are filled and invariants checked.
ParsedConfig parse_config(std::string_view text);

/// Validates a single config and fills its automatic mode; returns warnings.
std::vector<std::string> validate(ExperimentConfig& config);

std::string render_config(const ExperimentConfig& config);
std::string render_config(const GridSpec& grid);

struct CellResult {
    ExperimentConfig config;
    std::string label;
    std::optional<RateVerdict> verdict;
    std::optional<LyapunovParams> lyapunov;
    std::vector<std::string> notes; // warnings, skipped checks
    std::optional<std::string> error;
    std::filesystem::path directory;
    ZSequence z;

    /// Failed cells and failing asserted verdicts both count as failures.
    [[nodiscard]] bool passed() const {
        return !error && (!verdict || verdict->passed());
    }
};

/// Runs one configuration and writes trajectory.csv, energy.csv, z.csv and
/// verdict.json under output_dir/label. Never throws for per-run failures;
/// they are reported in CellResult::error.
CellResult run_experiment(const ExperimentConfig& config);

/// Label used for the output directory when the config has none.
std::string default_label(const ExperimentConfig& config, double gamma);

struct GridReport {
    std::vector<CellResult> cells;
    std::string summary_text;
    std::filesystem::path summary_csv;
    std::optional<std::filesystem::path> svg;

    [[nodiscard]] bool all_passed() const;
};

/// Expands the grid into per-cell configs (alpha and objective gamma replaced).
std::vector<ExperimentConfig> expand_grid(const GridSpec& grid);

/// Worker count: explicit value, else NESTEROV_RATES_WORKERS, else hardware.
int worker_count(int requested);

GridReport run_grid(const GridSpec& grid);

struct SvgSeries {
    std::string label;
    std::vector<double> t;
    std::vector<double> z;
};

/// Log-x / linear-y [0, 1.05] line plot with a legend. Deterministic.
std::string render_svg(const std::vector<SvgSeries>& series);
void emit_svg(const std::vector<SvgSeries>& series, const std::filesystem::path& path);

} // namespace nesterov_rates
