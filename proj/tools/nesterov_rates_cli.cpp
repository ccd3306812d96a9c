// Command-line front end: run, grid, probe, rate.
//
// Exit codes: 0 all asserted verdicts pass, 1 an asserted verdict fails,
// 2 configuration error.

#include "nesterov_rates/harness.hpp"
#include "nesterov_rates/objective.hpp"
#include "nesterov_rates/rates.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace nr = nesterov_rates;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw nr::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw nr::ConfigError("invalid coordinate '" + item + "'");
        }
    }
    return out;
}

void print_cell(const nr::CellResult& cell) {
    for (const auto& note : cell.notes) std::cerr << "note: " << note << '\n';
    if (cell.error) {
        std::cout << cell.label << ": FAILED: " << *cell.error << '\n';
        return;
    }
    std::cout << "outputs: " << cell.directory.string() << '\n';
    if (!cell.verdict) {
        std::cout << cell.label << ": no verdict\n";
        return;
    }
    const auto& v = *cell.verdict;
    std::printf("%s: branch %s, theoretical %.6g, fitted %.4f +/- %.4f, z tail ratio %.4f\n",
                cell.label.c_str(), nr::to_string(v.regime.branch), v.regime.exponent,
                v.fit.exponent, v.fit.exponent_err, v.z_tail_ratio);
    std::printf("  boundedness %s%s, nonvanishing %s%s -> %s\n", v.boundedness ? "pass" : "fail",
                v.regime.upper_bound_proven ? "" : " (not asserted)",
                v.nonvanishing ? "pass" : "fail",
                v.regime.lower_bound_proven ? "" : " (not asserted)",
                v.passed() ? "PASS" : "FAIL");
}

void print_probe(const nr::GeometryProbeReport& r) {
    const char* name = r.hypothesis == nr::Hypothesis::H1 ? "H1" : "H2";
    std::printf("%s(%g) on ball radius %g, %d samples: %s, worst margin %.6e", name, r.exponent,
                r.radius, r.n_samples, r.holds ? "holds" : "violated", r.worst_margin);
    if (r.hypothesis == nr::Hypothesis::H2) std::printf(", K = %g", r.constant);
    std::printf(", empirical M = %.6g\n", r.flatness_constant);
    if (r.witness) {
        std::printf("  witness:");
        for (Eigen::Index i = 0; i < r.witness->size(); ++i) std::printf(" %.17g", (*r.witness)[i]);
        std::printf("\n");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inertial gradient dynamics: simulation and convergence-rate verification"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit"); // -h is the step size

    // run
    auto* run_cmd = app.add_subcommand("run", "Simulate one configuration and verify its rate");
    std::string config_path;
    nr::ExperimentConfig cli_config;
    std::string mode_text;
    std::string x0_text;
    std::string lyapunov_text = "auto-sharp";
    double steps_value = 1e6;
    auto* config_opt = run_cmd->add_option("--config", config_path, "JSON config file");
    auto* objective_opt = run_cmd->add_option("--objective", cli_config.objective,
                                              "objective, e.g. power:gamma=2");
    run_cmd->add_option("--alpha", cli_config.alpha, "damping parameter")->excludes(config_opt);
    run_cmd->add_option("--steps", steps_value, "number of steps (1e6 accepted)")
        ->excludes(config_opt);
    run_cmd->add_option("--h", cli_config.h, "scheme step size")->excludes(config_opt);
    run_cmd->add_option("--dt", cli_config.dt, "integrator step")->excludes(config_opt);
    run_cmd->add_option("--t0", cli_config.t0, "integrator start time")->excludes(config_opt);
    run_cmd->add_option("--mode", mode_text, "nesterov | prox-nesterov | ode-rk4")
        ->excludes(config_opt);
    run_cmd->add_option("--x0", x0_text, "initial point, comma separated")->excludes(config_opt);
    run_cmd->add_option("--stride", cli_config.stride, "record every n-th step")
        ->excludes(config_opt);
    run_cmd->add_option("--lyapunov", lyapunov_text, "auto-sharp | auto-flat")
        ->excludes(config_opt);
    run_cmd->add_option("--out", cli_config.output_dir, "output directory")->excludes(config_opt);
    run_cmd->add_option("--label", cli_config.label, "output subdirectory")->excludes(config_opt);
    objective_opt->excludes(config_opt);

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "Run a grid of (alpha, gamma) cells");
    std::string grid_path;
    int workers = 0;
    grid_cmd->add_option("--config", grid_path, "JSON grid config")->required();
    grid_cmd->add_option("--workers", workers, "worker threads (default: environment)");

    // probe
    auto* probe_cmd = app.add_subcommand("probe", "Sample the H1/H2 geometry conditions");
    std::string probe_objective;
    std::optional<double> h1;
    std::optional<double> h2;
    double probe_K = 1.0;
    double radius = 1.0;
    int samples = 1000;
    std::uint64_t seed = 0;
    std::string center_text;
    probe_cmd->add_option("--objective", probe_objective, "objective spec")->required();
    probe_cmd->add_option("--h1", h1, "exponent gamma for H1");
    probe_cmd->add_option("--h2", h2, "exponent r for H2");
    probe_cmd->add_option("--K", probe_K, "H2 constant");
    probe_cmd->add_option("--radius", radius, "ball radius");
    probe_cmd->add_option("--samples", samples, "number of samples");
    probe_cmd->add_option("--seed", seed, "generator seed");
    probe_cmd->add_option("--center", center_text, "ball center (default: minimizer hint)");

    // rate
    auto* rate_cmd = app.add_subcommand("rate", "Print the theoretical rate branch and exponent");
    double rate_alpha = 0.0;
    double rate_gamma = 0.0;
    rate_cmd->add_option("--alpha", rate_alpha, "damping parameter")->required();
    rate_cmd->add_option("--gamma", rate_gamma, "geometry exponent")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run_cmd) {
            nr::ExperimentConfig config;
            if (!config_path.empty()) {
                auto parsed = nr::parse_config(read_file(config_path));
                if (parsed.is_grid()) throw nr::ConfigError("use `grid` for grid configs");
                for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
                config = std::get<nr::ExperimentConfig>(parsed.value);
            } else {
                if (objective_opt->count() == 0) {
                    throw nr::ConfigError("run needs --config or --objective");
                }
                config = cli_config;
                if (steps_value < 1 || steps_value != std::floor(steps_value)) {
                    throw nr::ConfigError("--steps must be a positive integer");
                }
                config.steps = static_cast<long long>(steps_value);
                if (!mode_text.empty()) config.mode = nr::mode_from_string(mode_text);
                if (!x0_text.empty()) config.x0 = parse_point(x0_text);
                if (lyapunov_text == "auto-flat") config.lyapunov = nr::LyapunovChoice::auto_flat;
                else if (lyapunov_text != "auto-sharp") {
                    throw nr::ConfigError("--lyapunov must be auto-sharp or auto-flat");
                }
                for (const auto& w : nr::validate(config)) std::cerr << "warning: " << w << '\n';
            }
            const auto cell = nr::run_experiment(config);
            print_cell(cell);
            return cell.passed() ? 0 : kExitFail;
        }

        if (*grid_cmd) {
            auto parsed = nr::parse_config(read_file(grid_path));
            if (!parsed.is_grid()) throw nr::ConfigError("config has no 'grid' section");
            for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << '\n';
            auto grid = std::get<nr::GridSpec>(parsed.value);
            if (workers > 0) grid.parallelism = workers;
            const auto report = nr::run_grid(grid);
            std::cout << report.summary_text;
            std::cout << "summary: " << report.summary_csv.string() << '\n';
            if (report.svg) std::cout << "plot: " << report.svg->string() << '\n';
            return report.all_passed() ? 0 : kExitFail;
        }

        if (*probe_cmd) {
            nr::ObjectiveSpec obj;
            try {
                obj = nr::parse_objective(probe_objective);
            } catch (const std::invalid_argument& e) {
                throw nr::ConfigError(e.what());
            }
            if (!h1 && !h2) throw nr::ConfigError("probe needs --h1 and/or --h2");
            nr::Vector center = obj.minimizer();
            if (!center_text.empty()) {
                const auto c = parse_point(center_text);
                if (static_cast<int>(c.size()) != obj.dim) {
                    throw nr::ConfigError("--center has the wrong dimension");
                }
                center = Eigen::Map<const nr::Vector>(c.data(), obj.dim);
            }
            if (!(radius > 0.0) || samples < 1) {
                throw nr::ConfigError("probe needs radius > 0 and samples >= 1");
            }
            bool all_hold = true;
            if (h1) {
                const auto r = nr::probe_H1(obj, *h1, center, radius, samples, seed);
                print_probe(r);
                all_hold = all_hold && r.holds;
            }
            if (h2) {
                if (!(probe_K > 0.0)) throw nr::ConfigError("--K must be positive");
                const auto r = nr::probe_H2(obj, *h2, probe_K, center, radius, samples, seed);
                print_probe(r);
                all_hold = all_hold && r.holds;
            }
            return all_hold ? 0 : kExitFail;
        }

        if (*rate_cmd) {
            nr::RateRegime r;
            try {
                r = nr::theoretical_rate(rate_alpha, rate_gamma);
            } catch (const std::invalid_argument& e) {
                throw nr::ConfigError(e.what());
            }
            std::printf("branch %s\nexponent %.17g\nupper bound %s\nlower bound %s\n",
                        nr::to_string(r.branch), r.exponent,
                        r.upper_bound_proven ? "proven" : "unproven",
                        r.lower_bound_proven ? "proven" : "unproven");
            return 0;
        }
    } catch (const nr::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return 0;
}
