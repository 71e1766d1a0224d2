#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mhd1d/config.hpp"
#include "mhd1d/diagnostics.hpp"
#include "mhd1d/limit_study.hpp"
#include "mhd1d/run.hpp"
#include "mhd1d/scenario.hpp"
#include "mhd1d/verify.hpp"

namespace py = pybind11;
using namespace mhd1d;

namespace {

// Configs cross the boundary as JSON text; the python side speaks dicts.
RunConfig config_of(const std::string& text) {
    try {
        return parse_config(text);
    } catch (const ConfigError& e) {
        std::string msg;
        for (const auto& p : e.problems()) msg += (msg.empty() ? "" : "\n") + p;
        throw py::value_error(msg);
    }
}

py::dict columns_of(const DiagnosticsRecord& rec) {
    py::dict out;
    for (const auto& col : diagnostics_columns()) {
        std::vector<double> v;
        v.reserve(rec.rows.size());
        for (const auto& row : rec.rows) v.push_back(row.*col.member);
        out[py::str(col.name)] = v;
    }
    return out;
}

py::dict state_of(const State& s, const Grid1D& g) {
    std::vector<double> x(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) x[i] = g.x(i);
    py::dict out;
    out["t"] = s.t;
    out["x"] = x;
    out["rho"] = s.rho;
    out["mom"] = s.mom;
    out["b"] = s.b;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "1D isentropic MHD solver core";
    m.attr("__version__") = MHD1D_VERSION;

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<BoundaryError>(m, "BoundaryError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    m.def("canonical_config", [](const std::string& text) { return canonical_config(config_of(text)); });
    m.def("config_fingerprint", [](const std::string& text) { return config_fingerprint(config_of(text)); });

    m.def("initial_state", [](const std::string& text) {
        const RunConfig c = config_of(text);
        return state_of(build_initial_state(c.scenario, c.physics, c.grid()), c.grid());
    });

    m.def(
        "simulate",
        [](const std::string& text) {
            const RunConfig c = config_of(text);
            RunResult r;
            {
                py::gil_scoped_release release;
                r = run(c.scenario, c.physics, c.scheme, c.grid(), c.mode, {comparison_tag(c)});
            }
            std::ostringstream csv;
            write_csv(csv, r.record);
            py::dict out;
            out["diagnostics"] = columns_of(r.record);
            out["csv"] = csv.str();
            out["final_state"] = state_of(r.final_state, c.grid());
            out["clipping_count"] = r.clip_events;
            return out;
        },
        py::arg("config"));

    m.def(
        "sweep",
        [](const std::string& text, unsigned jobs) {
            const RunConfig c = config_of(text);
            SweepOptions o;
            o.jobs = jobs;
            o.fingerprint = config_fingerprint(c);
            std::string report;
            {
                py::gil_scoped_release release;
                report = to_json(sweep(c.nu_list, c.pair_config(), o)).dump();
            }
            return report;
        },
        py::arg("config"), py::arg("jobs") = 1u);

    m.def("verify", [] {
        std::vector<CheckResult> results;
        {
            py::gil_scoped_release release;
            results = run_verification();
        }
        py::list out;
        for (const auto& r : results) out.append(py::make_tuple(r.name, r.passed, r.detail));
        return out;
    });

    m.def("fit_rate", [](const std::vector<double>& nu, const std::vector<double>& e) {
        const RateFit f = fit_rate(nu, e);
        return py::make_tuple(f.slope, f.intercept, f.rms_residual);
    });

    m.def(
        "potential_energy_bounds",
        [](double gamma, double rho_bar) {
            const auto b = potential_energy_bounds(gamma, rho_bar);
            return py::make_tuple(b.c1, b.c2, b.C1, b.C2);
        },
        py::arg("gamma"), py::arg("rho_bar"));
}
