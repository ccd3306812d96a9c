#include "nesterov_rates/harness.hpp"

#include "nesterov_rates/dynamics.hpp"
#include "nesterov_rates/objective.hpp"
#include "text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace nesterov_rates {

using json = nlohmann::ordered_json;

const char* to_string(Mode mode) {
    switch (mode) {
    case Mode::nesterov: return "nesterov";
    case Mode::prox_nesterov: return "prox-nesterov";
    case Mode::ode_rk4: return "ode-rk4";
    }
    return "nesterov";
}

Mode mode_from_string(const std::string& text) {
    if (text == "nesterov") return Mode::nesterov;
    if (text == "prox-nesterov") return Mode::prox_nesterov;
    if (text == "ode-rk4") return Mode::ode_rk4;
    throw ConfigError("unknown mode '" + text + "' (nesterov | prox-nesterov | ode-rk4)");
}

const char* to_string(LyapunovChoice choice) {
    switch (choice) {
    case LyapunovChoice::auto_sharp: return "auto-sharp";
    case LyapunovChoice::auto_flat: return "auto-flat";
    case LyapunovChoice::manual: return "manual";
    }
    return "auto-sharp";
}

namespace {

const std::set<std::string> kConfigKeys = {
    "objective", "alpha", "mode",  "h",        "dt",         "t0",    "steps", "x0",
    "v0",        "stride", "rate_override", "lyapunov", "seed", "output_dir", "label"};

const std::set<std::string> kGridKeys = {"cells", "alphas", "gammas", "parallelism", "svg"};

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
    return j.get<double>();
}

long long integer(const json& j, const std::string& key) {
    const double v = number(j, key);
    if (v != std::floor(v) || std::abs(v) > 9e15) {
        throw ConfigError("'" + key + "' must be an integer");
    }
    return static_cast<long long>(v);
}

std::vector<double> point(const json& j, const std::string& key) {
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_array()) throw ConfigError("'" + key + "' must be a number or an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(number(v, key));
    return out;
}

ExperimentConfig parse_experiment(const json& doc, bool grid_base) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (!kConfigKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    ExperimentConfig c;
    if (!doc.contains("objective")) throw ConfigError("config requires 'objective'");
    if (!doc["objective"].is_string()) throw ConfigError("'objective' must be a string");
    c.objective = doc["objective"].get<std::string>();
    if (doc.contains("alpha")) c.alpha = number(doc["alpha"], "alpha");
    else if (!grid_base) throw ConfigError("config requires 'alpha'");
    if (doc.contains("mode")) {
        if (!doc["mode"].is_string()) throw ConfigError("'mode' must be a string");
        c.mode = mode_from_string(doc["mode"].get<std::string>());
    }
    if (doc.contains("h")) c.h = number(doc["h"], "h");
    if (doc.contains("dt")) c.dt = number(doc["dt"], "dt");
    if (doc.contains("t0")) c.t0 = number(doc["t0"], "t0");
    if (doc.contains("steps")) c.steps = integer(doc["steps"], "steps");
    if (doc.contains("x0")) c.x0 = point(doc["x0"], "x0");
    if (doc.contains("v0")) c.v0 = point(doc["v0"], "v0");
    if (doc.contains("stride")) c.stride = integer(doc["stride"], "stride");
    if (doc.contains("rate_override") && !doc["rate_override"].is_null()) {
        c.rate_override = number(doc["rate_override"], "rate_override");
    }
    if (doc.contains("lyapunov")) {
        const auto& l = doc["lyapunov"];
        if (l.is_string()) {
            const auto s = l.get<std::string>();
            if (s == "auto-sharp") c.lyapunov = LyapunovChoice::auto_sharp;
            else if (s == "auto-flat") c.lyapunov = LyapunovChoice::auto_flat;
            else throw ConfigError("unknown lyapunov choice '" + s + "'");
        } else if (l.is_object()) {
            for (const auto& [key, _] : l.items()) {
                if (key != "lambda" && key != "p") {
                    throw ConfigError("unknown lyapunov key '" + key + "'");
                }
            }
            if (!l.contains("lambda") || !l.contains("p")) {
                throw ConfigError("manual lyapunov parameters need 'lambda' and 'p'");
            }
            c.lyapunov = LyapunovChoice::manual;
            c.manual_lambda = number(l["lambda"], "lambda");
            c.manual_p = number(l["p"], "p");
        } else {
            throw ConfigError("'lyapunov' must be a string or an object");
        }
    }
    if (doc.contains("seed")) {
        const auto s = integer(doc["seed"], "seed");
        if (s < 0) throw ConfigError("'seed' must be non-negative");
        c.seed = static_cast<std::uint64_t>(s);
    }
    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) throw ConfigError("'output_dir' must be a string");
        c.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) throw ConfigError("'label' must be a string");
        c.label = doc["label"].get<std::string>();
    }
    return c;
}

json experiment_json(const ExperimentConfig& c) {
    json j;
    j["objective"] = c.objective;
    j["alpha"] = c.alpha;
    if (c.mode) j["mode"] = to_string(*c.mode);
    j["h"] = c.h;
    j["dt"] = c.dt;
    j["t0"] = c.t0;
    j["steps"] = c.steps;
    j["x0"] = c.x0;
    j["v0"] = c.v0;
    j["stride"] = c.stride;
    j["rate_override"] = c.rate_override ? json(*c.rate_override) : json(nullptr);
    if (c.lyapunov == LyapunovChoice::manual) {
        j["lyapunov"] = {{"lambda", c.manual_lambda}, {"p", c.manual_p}};
    } else {
        j["lyapunov"] = to_string(c.lyapunov);
    }
    j["seed"] = c.seed;
    j["output_dir"] = c.output_dir;
    j["label"] = c.label;
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

template <class Writer>
void write_with(const std::filesystem::path& path, Writer&& writer) {
    std::ostringstream buf;
    writer(buf);
    write_file(path, buf.str());
}

LyapunovParams lyapunov_for(const ExperimentConfig& c, double gamma) {
    switch (c.lyapunov) {
    case LyapunovChoice::auto_flat: return LyapunovParams::flat(c.alpha, gamma);
    case LyapunovChoice::manual:
        return LyapunovParams::manual(c.alpha, gamma, c.manual_lambda, c.manual_p);
    case LyapunovChoice::auto_sharp: break;
    }
    return LyapunovParams::sharp(c.alpha, gamma);
}

} // namespace

std::vector<std::string> validate(ExperimentConfig& c) {
    std::vector<std::string> warnings;
    ObjectiveSpec obj;
    try {
        obj = parse_objective(c.objective);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(c.alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (c.steps < 1) throw ConfigError("steps must be >= 1");
    if (c.stride < 1) throw ConfigError("stride must be >= 1");
    if (!(c.h > 0.0)) throw ConfigError("h must be positive");
    if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(c.t0 > 0.0)) throw ConfigError("t0 must be positive");
    if (c.rate_override && !std::isfinite(*c.rate_override)) {
        throw ConfigError("rate_override must be finite");
    }
    for (const auto* p : {&c.x0, &c.v0}) {
        if (p->size() > 1 && static_cast<int>(p->size()) != obj.dim) {
            throw ConfigError("initial point has " + std::to_string(p->size()) +
                              " entries, objective dimension is " + std::to_string(obj.dim));
        }
    }
    if (!c.mode) c.mode = resolve_mode(c, obj);
    if (*c.mode == Mode::prox_nesterov && !obj.has_prox()) {
        throw ConfigError("mode prox-nesterov requires an objective with a prox");
    }
    if (*c.mode != Mode::ode_rk4 && !c.v0.empty()) {
        throw ConfigError("v0 is only meaningful for mode ode-rk4; schemes start at rest");
    }
    if (*c.mode == Mode::nesterov && obj.nominal_gamma < 2.0) {
        warnings.push_back("gradient steps on '" + obj.name +
                           "': the gradient is not Lipschitz at the minimizer (gamma < 2)");
    }
    if (c.lyapunov == LyapunovChoice::auto_flat && !(obj.nominal_gamma > 2.0)) {
        throw ConfigError("lyapunov auto-flat requires gamma > 2");
    }
    return warnings;
}

ParsedConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");

    ParsedConfig out;
    if (!doc.contains("grid")) {
        auto config = parse_experiment(doc, false);
        out.warnings = validate(config);
        out.value = std::move(config);
        return out;
    }

    const json g = doc["grid"];
    doc.erase("grid");
    if (!g.is_object()) throw ConfigError("'grid' must be an object");
    for (const auto& [key, _] : g.items()) {
        if (!kGridKeys.contains(key)) throw ConfigError("unknown grid key '" + key + "'");
    }
    GridSpec grid;
    grid.base = parse_experiment(doc, true);
    if (g.contains("cells")) {
        if (!g["cells"].is_array()) throw ConfigError("'cells' must be an array");
        for (const auto& cell : g["cells"]) {
            if (cell.is_array() && cell.size() == 2) {
                grid.cells.emplace_back(number(cell[0], "alpha"), number(cell[1], "gamma"));
            } else if (cell.is_object() && cell.size() == 2 && cell.contains("alpha") &&
                       cell.contains("gamma")) {
                grid.cells.emplace_back(number(cell["alpha"], "alpha"),
                                        number(cell["gamma"], "gamma"));
            } else {
                throw ConfigError("grid cells are [alpha, gamma] or {alpha, gamma}");
            }
        }
    }
    if (g.contains("alphas") != g.contains("gammas")) {
        throw ConfigError("'alphas' and 'gammas' must be given together");
    }
    if (g.contains("alphas")) {
        const auto alphas = point(g["alphas"], "alphas");
        const auto gammas = point(g["gammas"], "gammas");
        for (double gamma : gammas) {
            for (double alpha : alphas) grid.cells.emplace_back(alpha, gamma);
        }
    }
    if (grid.cells.empty()) throw ConfigError("grid has no cells");
    if (g.contains("parallelism")) {
        grid.parallelism = static_cast<int>(integer(g["parallelism"], "parallelism"));
        if (grid.parallelism < 0) throw ConfigError("'parallelism' must be >= 0");
    }
    if (g.contains("svg")) {
        if (!g["svg"].is_boolean()) throw ConfigError("'svg' must be a boolean");
        grid.svg = g["svg"].get<bool>();
    }
    for (auto cell : expand_grid(grid)) {
        try {
            for (auto& w : validate(cell)) out.warnings.push_back(cell.label + ": " + w);
        } catch (const ConfigError& e) {
            throw ConfigError("grid cell " + cell.label + ": " + e.what());
        }
    }
    out.value = std::move(grid);
    return out;
}

std::string render_config(const ExperimentConfig& config) {
    return experiment_json(config).dump(2) + "\n";
}

std::string render_config(const GridSpec& grid) {
    json j = experiment_json(grid.base);
    json cells = json::array();
    for (const auto& [alpha, gamma] : grid.cells) cells.push_back({alpha, gamma});
    j["grid"] = {{"cells", cells}, {"parallelism", grid.parallelism}, {"svg", grid.svg}};
    return j.dump(2) + "\n";
}

std::string default_label(const ExperimentConfig& config, double gamma) {
    return "alpha" + detail::shortest(config.alpha) + "_gamma" + detail::shortest(gamma);
}

CellResult run_experiment(const ExperimentConfig& input) {
    CellResult cell;
    cell.config = input;
    cell.label = input.label;
    try {
        auto& c = cell.config;
        cell.notes = validate(c);
        const auto obj = parse_objective(c.objective);
        const double gamma = obj.nominal_gamma;
        if (cell.label.empty()) cell.label = default_label(c, gamma);
        cell.directory = std::filesystem::path(c.output_dir) / cell.label;
        std::filesystem::create_directories(cell.directory);

        const auto traj = run(c, obj);
        write_with(cell.directory / "trajectory.csv",
                   [&](std::ostream& os) { write_trajectory_csv(traj, os); });
        if (!traj.ok()) {
            cell.error = *traj.error;
            return cell;
        }

        RateRegime regime = theoretical_rate(c.alpha, gamma);
        if (c.rate_override) regime.exponent = *c.rate_override;

        cell.lyapunov = lyapunov_for(c, gamma);
        const auto energies = energy_along(traj, *cell.lyapunov, obj.minimizer(), regime.exponent);
        write_with(cell.directory / "energy.csv",
                   [&](std::ostream& os) { write_energy_csv(energies, os); });

        cell.z = z_sequence(traj, regime.exponent);
        write_with(cell.directory / "z.csv", [&](std::ostream& os) { write_z_csv(cell.z, os); });

        const bool integrator = *c.mode == Mode::ode_rk4;
        const double start = integrator ? integrator_start(c.t0, c.dt) : 0.0;
        if (integrator && static_cast<double>(c.steps) * c.dt < 10.0 * start) {
            cell.notes.push_back("verdict skipped: horizon shorter than 10 t0");
            return cell;
        }
        try {
            cell.verdict = verify_rate(traj, regime);
        } catch (const std::invalid_argument& e) {
            cell.notes.push_back(std::string("verdict skipped: ") + e.what());
            return cell;
        }
        write_file(cell.directory / "verdict.json", verdict_json(*cell.verdict, obj.name) + "\n");
    } catch (const std::exception& e) {
        cell.error = e.what();
    }
    return cell;
}

std::vector<ExperimentConfig> expand_grid(const GridSpec& grid) {
    std::vector<ExperimentConfig> out;
    for (const auto& [alpha, gamma] : grid.cells) {
        ExperimentConfig c = grid.base;
        c.alpha = alpha;
        if (c.objective.starts_with("lsq")) {
            if (gamma != 2.0) throw ConfigError("least squares cells must use gamma = 2");
        } else {
            try {
                c.objective = with_gamma(c.objective, gamma);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        c.label = default_label(c, gamma);
        out.push_back(std::move(c));
    }
    return out;
}

int worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("NESTEROV_RATES_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

bool GridReport::all_passed() const {
    return std::all_of(cells.begin(), cells.end(), [](const auto& c) { return c.passed(); });
}

GridReport run_grid(const GridSpec& grid) {
    if (grid.cells.empty()) throw ConfigError("grid has no cells");
    const auto configs = expand_grid(grid);
    GridReport report;
    report.cells.resize(configs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            report.cells[i] = run_experiment(configs[i]);
        }
    };
    const int n_workers =
        std::min<int>(worker_count(grid.parallelism), static_cast<int>(configs.size()));
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
        worker();
    }

    const std::filesystem::path out_dir(grid.base.output_dir);
    std::filesystem::create_directories(out_dir);

    std::ostringstream text;
    std::ostringstream csv;
    csv << "label,objective,alpha,gamma,branch,theoretical,fitted,fitted_err,z_tail_ratio,"
           "boundedness,nonvanishing,passed,status\n";
    char line[512];
    std::snprintf(line, sizeof line, "%-22s %-18s %11s %9s %7s %10s %6s %6s  %s\n", "cell",
                  "branch", "theoretical", "fitted", "+/-", "z_tail", "bound", "nonvan",
                  "status");
    text << line;
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        const auto& cell = report.cells[i];
        const auto& cfg = configs[i];
        const double gamma = grid.cells[i].second;
        std::string status = cell.error ? "FAILED: " + *cell.error
                             : !cell.verdict ? "no verdict"
                             : cell.verdict->passed() ? "pass"
                                                      : "FAIL";
        if (const auto& v = cell.verdict) {
            std::snprintf(line, sizeof line, "%-22s %-18s %11.4f %9.4f %7.4f %10.4f %6s %6s  %s\n",
                          cfg.label.c_str(), to_string(v->regime.branch), v->regime.exponent,
                          v->fit.exponent, v->fit.exponent_err, v->z_tail_ratio,
                          v->boundedness ? "yes" : "no", v->nonvanishing ? "yes" : "no",
                          status.c_str());
            csv << cfg.label << ',' << cfg.objective << ',' << detail::sig17(cfg.alpha) << ','
                << detail::sig17(gamma) << ',' << to_string(v->regime.branch) << ','
                << detail::sig17(v->regime.exponent) << ',' << detail::sig17(v->fit.exponent)
                << ',' << detail::sig17(v->fit.exponent_err) << ','
                << detail::sig17(v->z_tail_ratio) << ',' << v->boundedness << ','
                << v->nonvanishing << ',' << v->passed() << ",\"" << status << "\"\n";
        } else {
            std::snprintf(line, sizeof line, "%-22s %-18s %11s %9s %7s %10s %6s %6s  %s\n",
                          cfg.label.c_str(), "-", "-", "-", "-", "-", "-", "-", status.c_str());
            csv << cfg.label << ',' << cfg.objective << ',' << detail::sig17(cfg.alpha) << ','
                << detail::sig17(gamma) << ",,,,,,,,0,\"" << status << "\"\n";
        }
        text << line;
    }
    report.summary_text = text.str();
    write_file(out_dir / "summary.txt", report.summary_text);
    report.summary_csv = out_dir / "summary.csv";
    write_file(report.summary_csv, csv.str());

    if (grid.svg) {
        std::vector<SvgSeries> series;
        for (const auto& cell : report.cells) {
            if (cell.error || cell.z.degenerate || cell.z.t.empty()) continue;
            series.push_back({cell.label, cell.z.t, cell.z.z});
        }
        if (!series.empty()) {
            report.svg = out_dir / "z.svg";
            emit_svg(series, *report.svg);
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// SVG

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

} // namespace

std::string render_svg(const std::vector<SvgSeries>& input) {
    if (input.empty()) throw std::invalid_argument("render_svg: no series");

    struct Prepared {
        std::string legend;
        std::vector<double> t;
        std::vector<double> z;
    };
    std::vector<Prepared> series;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (const auto& s : input) {
        if (s.t.size() != s.z.size()) throw std::invalid_argument("render_svg: size mismatch");
        Prepared p;
        std::size_t first = 0;
        while (first < s.z.size() && (s.z[first] == 0.0 || !(s.t[first] > 0.0))) ++first;
        p.legend = s.label;
        if (first > 0) p.legend += " (" + std::to_string(first) + " zero-gap records dropped)";
        p.t.assign(s.t.begin() + static_cast<std::ptrdiff_t>(first), s.t.end());
        p.z.assign(s.z.begin() + static_cast<std::ptrdiff_t>(first), s.z.end());
        for (double t : p.t) {
            lo = std::min(lo, std::log10(t));
            hi = std::max(hi, std::log10(t));
        }
        series.push_back(std::move(p));
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }

    constexpr double width = 860.0;
    constexpr double height = 480.0;
    constexpr double left = 60.0;
    constexpr double right = 640.0;
    constexpr double top = 20.0;
    constexpr double bottom = 430.0;
    auto px = [&](double t) { return left + (std::log10(t) - lo) / (hi - lo) * (right - left); };
    auto py = [&](double z) { return bottom - z / 1.05 * (bottom - top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left
        << "\" height=\"" << bottom - top << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = static_cast<int>(std::ceil(lo)); k <= static_cast<int>(std::floor(hi)); ++k) {
        const double x = left + (k - lo) / (hi - lo) * (right - left);
        svg << "<line x1=\"" << fmt2(x) << "\" y1=\"" << bottom << "\" x2=\"" << fmt2(x)
            << "\" y2=\"" << bottom + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << fmt2(x) << "\" y=\"" << bottom + 18
            << "\" text-anchor=\"middle\">1e" << k << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double z = 0.25 * k;
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt2(py(z)) << "\" x2=\"" << left
            << "\" y2=\"" << fmt2(py(z)) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << fmt2(py(z) + 4)
            << "\" text-anchor=\"end\">" << fmt2(z) << "</text>\n";
    }
    svg << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\">t (log scale)</text>\n";
    svg << "<text x=\"15\" y=\"" << (top + bottom) / 2 << "\" transform=\"rotate(-90 15 "
        << (top + bottom) / 2 << ")\" text-anchor=\"middle\">normalized z</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& p = series[s];
        const char* color = kPalette[s % std::size(kPalette)];
        // Keep first/min/max/last of every half-pixel column, in time order.
        std::string points;
        std::size_t i = 0;
        std::string last_emitted;
        auto emit = [&](std::size_t k) {
            std::string pt = fmt2(px(p.t[k])) + "," + fmt2(py(p.z[k]));
            if (pt == last_emitted) return;
            if (!points.empty()) points += ' ';
            points += pt;
            last_emitted = pt;
        };
        while (i < p.t.size()) {
            const auto column = static_cast<long>(std::floor(2.0 * px(p.t[i])));
            std::size_t j = i;
            std::size_t kmin = i;
            std::size_t kmax = i;
            while (j < p.t.size() && static_cast<long>(std::floor(2.0 * px(p.t[j]))) == column) {
                if (p.z[j] < p.z[kmin]) kmin = j;
                if (p.z[j] > p.z[kmax]) kmax = j;
                ++j;
            }
            emit(i);
            emit(std::min(kmin, kmax));
            emit(std::max(kmin, kmax));
            emit(j - 1);
            i = j;
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\""
            << points << "\"/>\n";
        const double ly = top + 10.0 + 20.0 * static_cast<double>(s);
        svg << "<line x1=\"" << right + 15 << "\" y1=\"" << fmt2(ly) << "\" x2=\"" << right + 40
            << "\" y2=\"" << fmt2(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << right + 45 << "\" y=\"" << fmt2(ly + 4) << "\">"
            << xml_escape(p.legend) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_svg(const std::vector<SvgSeries>& series, const std::filesystem::path& path) {
    write_file(path, render_svg(series));
}

} // namespace nesterov_rates
