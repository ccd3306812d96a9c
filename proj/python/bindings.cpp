#include "nesterov_rates/harness.hpp"
#include "nesterov_rates/lyapunov.hpp"
#include "nesterov_rates/objective.hpp"
#include "nesterov_rates/rates.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
namespace nr = nesterov_rates;

namespace {

nr::ExperimentConfig single_config(const std::string& text) {
    auto parsed = nr::parse_config(text);
    if (parsed.is_grid()) throw nr::ConfigError("expected a single-run config, got a grid");
    return std::get<nr::ExperimentConfig>(parsed.value);
}

py::dict trajectory_dict(const nr::Trajectory& traj) {
    const auto n = static_cast<py::ssize_t>(traj.records.size());
    const py::ssize_t d = traj.dim();
    py::array_t<long long> steps(n);
    py::array_t<double> t(n);
    py::array_t<double> gap(n);
    py::array_t<double> x({n, d});
    py::array_t<double> v({n, d});
    auto s = steps.mutable_unchecked<1>();
    auto tt = t.mutable_unchecked<1>();
    auto g = gap.mutable_unchecked<1>();
    auto xx = x.mutable_unchecked<2>();
    auto vv = v.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < n; ++i) {
        const auto& r = traj.records[static_cast<std::size_t>(i)];
        s(i) = r.n;
        tt(i) = r.t;
        g(i) = r.gap;
        for (py::ssize_t k = 0; k < d; ++k) {
            xx(i, k) = r.x[k];
            vv(i, k) = r.v[k];
        }
    }
    py::dict out;
    out["mode"] = nr::to_string(traj.mode);
    out["objective"] = traj.objective;
    out["alpha"] = traj.alpha;
    out["n"] = steps;
    out["t"] = t;
    out["x"] = x;
    out["v"] = v;
    out["gap"] = gap;
    out["error"] = traj.error ? py::object(py::str(*traj.error)) : py::none();
    return out;
}

std::vector<double> as_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Inertial gradient dynamics and convergence-rate verification";

    py::register_exception<nr::ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<nr::Branch>(m, "Branch")
        .value("sharp_subcritical", nr::Branch::sharp_subcritical)
        .value("flat_saturated", nr::Branch::flat_saturated)
        .value("flat_intermediate", nr::Branch::flat_intermediate);

    py::class_<nr::RateRegime>(m, "RateRegime")
        .def_readonly("alpha", &nr::RateRegime::alpha)
        .def_readonly("gamma", &nr::RateRegime::gamma)
        .def_readonly("branch", &nr::RateRegime::branch)
        .def_readonly("exponent", &nr::RateRegime::exponent)
        .def_readonly("upper_bound_proven", &nr::RateRegime::upper_bound_proven)
        .def_readonly("lower_bound_proven", &nr::RateRegime::lower_bound_proven)
        .def("__repr__", [](const nr::RateRegime& r) {
            return "RateRegime(branch='" + std::string(nr::to_string(r.branch)) +
                   "', exponent=" + std::to_string(r.exponent) + ")";
        });
    m.def("theoretical_rate", &nr::theoretical_rate, py::arg("alpha"), py::arg("gamma"));

    m.def("prox_power", &nr::prox_power, py::arg("gamma"), py::arg("h"), py::arg("y"));

    py::class_<nr::ObjectiveSpec>(m, "Objective")
        .def(py::init(&nr::parse_objective), py::arg("spec"))
        .def_readonly("name", &nr::ObjectiveSpec::name)
        .def_readonly("dim", &nr::ObjectiveSpec::dim)
        .def_readonly("f_star", &nr::ObjectiveSpec::f_star)
        .def_readonly("nominal_gamma", &nr::ObjectiveSpec::nominal_gamma)
        .def_property_readonly("minimizer", &nr::ObjectiveSpec::minimizer)
        .def("value", [](const nr::ObjectiveSpec& f, const nr::Vector& x) { return f.value(x); })
        .def("gradient",
             [](const nr::ObjectiveSpec& f, const nr::Vector& x) { return f.gradient(x); })
        .def("prox",
             [](const nr::ObjectiveSpec& f, double h, const nr::Vector& y) {
                 if (!f.has_prox()) throw std::invalid_argument("objective has no prox");
                 return f.prox(h, y);
             })
        .def("distance_to_minset",
             [](const nr::ObjectiveSpec& f, const nr::Vector& x) {
                 return f.distance_to_minset(x);
             });

    py::class_<nr::GeometryProbeReport>(m, "ProbeReport")
        .def_readonly("holds", &nr::GeometryProbeReport::holds)
        .def_readonly("worst_margin", &nr::GeometryProbeReport::worst_margin)
        .def_readonly("witness", &nr::GeometryProbeReport::witness)
        .def_readonly("flatness_constant", &nr::GeometryProbeReport::flatness_constant);
    m.def("probe_H1", &nr::probe_H1, py::arg("objective"), py::arg("gamma"), py::arg("x_star"),
          py::arg("radius"), py::arg("n_samples"), py::arg("seed") = 0);
    m.def("probe_H2", &nr::probe_H2, py::arg("objective"), py::arg("r"), py::arg("K"),
          py::arg("x_star"), py::arg("radius"), py::arg("n_samples"), py::arg("seed") = 0);

    py::class_<nr::LyapunovParams>(m, "LyapunovParams")
        .def_static("sharp", &nr::LyapunovParams::sharp, py::arg("alpha"), py::arg("gamma"))
        .def_static("flat", &nr::LyapunovParams::flat, py::arg("alpha"), py::arg("gamma"))
        .def_property_readonly("lambda_", &nr::LyapunovParams::lambda)
        .def_property_readonly("xi", &nr::LyapunovParams::xi)
        .def_property_readonly("p", &nr::LyapunovParams::p)
        .def_property_readonly("K1", &nr::LyapunovParams::K1);

    m.def(
        "simulate",
        [](const std::string& config_json) {
            const auto c = single_config(config_json);
            const auto obj = nr::parse_objective(c.objective);
            nr::Trajectory traj;
            {
                py::gil_scoped_release release;
                traj = nr::run(c, obj);
            }
            return trajectory_dict(traj);
        },
        py::arg("config_json"), "Simulate a validated JSON config; returns numpy arrays.");

    m.def(
        "fit_exponent",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& t,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& gap, double lo,
           double hi) {
            const auto fit = nr::fit_exponent(as_vector(t), as_vector(gap), lo, hi);
            py::dict out;
            out["degenerate"] = fit.degenerate;
            out["exponent"] = fit.exponent;
            out["exponent_err"] = fit.exponent_err;
            out["n_points"] = fit.n_points;
            out["rss_loglog"] = fit.rss_loglog;
            out["rss_loglinear"] = fit.rss_loglinear;
            return out;
        },
        py::arg("t"), py::arg("gap"), py::arg("lo") = 0.5, py::arg("hi") = 1.0);

    m.def(
        "run_experiment",
        [](const std::string& config_json) {
            const auto c = single_config(config_json);
            nr::CellResult cell;
            {
                py::gil_scoped_release release;
                cell = nr::run_experiment(c);
            }
            py::dict out;
            out["label"] = cell.label;
            out["directory"] = cell.directory;
            out["notes"] = cell.notes;
            out["error"] = cell.error ? py::object(py::str(*cell.error)) : py::none();
            out["verdict"] = cell.verdict
                                 ? py::module_::import("json").attr("loads")(
                                       nr::verdict_json(*cell.verdict, c.objective))
                                 : py::none();
            out["passed"] = cell.passed();
            return out;
        },
        py::arg("config_json"), "Run one config, write its outputs, return the verdict.");
}
