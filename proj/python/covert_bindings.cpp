#include <optional>
#include <sstream>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "covert/analytics.hpp"
#include "covert/config.hpp"
#include "covert/engine.hpp"
#include "covert/errors.hpp"
#include "covert/geometry.hpp"
#include "covert/parallel.hpp"

namespace py = pybind11;
using namespace covert;

namespace {

MomentConstant moment_constant(const std::string& name) {
    if (name == "exact") return MomentConstant::exact;
    if (name == "published") return MomentConstant::published;
    throw InvalidArgument("moment_constant: expected exact or published");
}

py::dict budget_dict(const CovertBudget& b) {
    py::dict d;
    d["epsilon"] = b.epsilon;
    d["c"] = b.c;
    d["P_f"] = b.P_f;
    d["conditioning_radius"] = b.conditioning_radius ? py::cast(*b.conditioning_radius) : py::none();
    d["regime_ok"] = b.regime_ok;
    return d;
}

std::string sweep(const std::string& params_text, std::optional<int> theorem, const std::string& format,
                  std::optional<std::size_t> workers, std::optional<std::uint64_t> seed) {
    auto parsed = parse_config(params_text, theorem);
    if (workers) parsed.spec.workers = *workers;
    else if (!parsed.has("workers")) parsed.spec.workers = default_worker_count();
    if (seed) parsed.spec.seed = *seed;
    parsed.spec.validate();
    ExperimentReport report;
    {
        py::gil_scoped_release release;
        report = run_sweep(parsed.spec);
    }
    std::ostringstream out;
    emit_report(report, parse_output_format(format), out);
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_covert, m) {
    m.doc() = "Covert communication with friendly jamming: closed forms and sweeps";

    py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<RegimeViolation>(m, "RegimeViolation", PyExc_ArithmeticError);

    m.attr("REPORT_SCHEMA") = std::string(kReportSchema);

    py::class_<ScenarioParams>(m, "ScenarioParams")
        .def(py::init([](double gamma, double P_r, double sigma2_w0, double sigma2_b0, double density,
                         std::uint64_t n, std::size_t N_w) {
                 ScenarioParams p{gamma, P_r, sigma2_w0, sigma2_b0, density, n, N_w, {}};
                 p.validate();
                 return p;
             }),
             py::kw_only(), py::arg("gamma") = 2.0, py::arg("P_r") = 1.0, py::arg("sigma2_w0") = 1.0,
             py::arg("sigma2_b0") = 1.0, py::arg("m") = 100.0, py::arg("n") = 1'000'000, py::arg("N_w") = 1)
        .def_readwrite("gamma", &ScenarioParams::gamma)
        .def_readwrite("P_r", &ScenarioParams::P_r)
        .def_readwrite("sigma2_w0", &ScenarioParams::sigma2_w0)
        .def_readwrite("sigma2_b0", &ScenarioParams::sigma2_b0)
        .def_readwrite("m", &ScenarioParams::m)
        .def_readwrite("n", &ScenarioParams::n)
        .def_readwrite("N_w", &ScenarioParams::N_w);

    m.def(
        "covert_budget",
        [](int theorem, double epsilon, const ScenarioParams& p, const std::string& constant) {
            const auto mc = moment_constant(constant);
            switch (theorem) {
                case 1: return budget_dict(covert_budget_thm1(epsilon, p, mc));
                case 2: return budget_dict(covert_budget_thm2(epsilon, p, mc));
                case 3: return budget_dict(covert_budget_thm3(epsilon, p, mc));
                default: throw InvalidArgument("theorem: must be 1, 2 or 3");
            }
        },
        py::arg("theorem"), py::arg("epsilon"), py::arg("params"), py::arg("moment_constant") = "exact");

    m.def(
        "expected_inv_noise_bound",
        [](double gamma, double P_r, const std::string& constant) {
            return expected_inv_noise_bound(gamma, P_r, moment_constant(constant));
        },
        py::arg("gamma"), py::arg("P_r") = 1.0, py::arg("moment_constant") = "exact");
    m.def("scalar_gaussian_kl", &scalar_gaussian_kl, py::arg("P_f"), py::arg("d_wa"), py::arg("sigma2_w"),
          py::arg("gamma"));
    m.def("nearest_distance_cdf", &nearest_distance_cdf, py::arg("m"), py::arg("x"));
    m.def("nearest_distance_moment", &nearest_distance_moment, py::arg("m"), py::arg("gamma"));

    m.def("run_sweep", &sweep, py::arg("params_text"), py::arg("theorem") = py::none(), py::arg("format") = "jsonl",
          py::arg("workers") = py::none(), py::arg("seed") = py::none(),
          "Run a parameter sweep from key = value text and return the report as CSV or JSON lines.");
}
