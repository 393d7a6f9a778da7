#include "twinobs/cli.hpp"
#include "twinobs/error.hpp"
#include "twinobs/measurement.hpp"
#include "twinobs/report.hpp"
#include "twinobs/spin.hpp"
#include "twinobs/twin_analysis.hpp"
#include "twinobs/twin_solver.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace twinobs;

namespace {

Dims to_dims(const std::pair<Index, Index>& d) { return {d.first, d.second}; }

BipartiteState make_state(const Matrix& rho, const std::pair<Index, Index>& dims, const Tolerances& tol) {
    return BipartiteState::from_matrix(rho, to_dims(dims), tol);
}

py::tuple pair_tuple(const ObservablePair& p) { return py::make_tuple(p.plus, p.minus); }

std::optional<Scenario> maybe_scenario(const std::optional<std::string>& name) {
    if (!name) return std::nullopt;
    return parse_scenario(*name);
}

}  // namespace

PYBIND11_MODULE(_twinobs, m) {
    m.doc() = "Twin observables of bipartite density matrices";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result([&] { return py::object(py::exception<Error>(m, "Error")); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object& cls = error_type.get_stored();
            py::object exc = cls(std::string(to_string(e.code())) + ": " + e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(cls.ptr(), exc.ptr());
        }
    });

    py::class_<Tolerances>(m, "Tolerances")
        .def(py::init([](double rank_tol, double residual_tol, double cluster_tol, double herm_tol) {
                 Tolerances t{rank_tol, residual_tol, cluster_tol, herm_tol};
                 t.validate();
                 return t;
             }),
             py::arg("rank_tol") = 1e-10, py::arg("residual_tol") = 1e-8, py::arg("cluster_tol") = 1e-8,
             py::arg("herm_tol") = 1e-9)
        .def_readonly("rank_tol", &Tolerances::rank_tol)
        .def_readonly("residual_tol", &Tolerances::residual_tol)
        .def_readonly("cluster_tol", &Tolerances::cluster_tol)
        .def_readonly("herm_tol", &Tolerances::herm_tol);

    m.def(
        "twin_space",
        [](const Matrix& rho, std::pair<Index, Index> dims, const Tolerances& tol) {
            const TwinSpace space = solve_twin_space(make_state(rho, dims, tol));
            py::list basis;
            for (const ObservablePair& p : space.basis) basis.append(pair_tuple(p));
            py::dict out;
            out["basis"] = basis;
            out["dim_total"] = space.dim_total;
            out["dim_detectable"] = space.dim_detectable;
            out["dim_undetectable_plus"] = space.dim_undetectable_plus;
            out["dim_undetectable_minus"] = space.dim_undetectable_minus;
            out["nonsingular"] = space.nonsingular;
            return out;
        },
        py::arg("rho"), py::arg("dims"), py::arg("tol") = Tolerances{});

    m.def(
        "twin_residual",
        [](const Matrix& rho, std::pair<Index, Index> dims, const Matrix& a_plus, const Matrix& a_minus,
           const Tolerances& tol) {
            const TwinCheck c = is_twin_pair(make_state(rho, dims, tol), make_pair(a_plus, a_minus, tol.herm_tol));
            return py::make_tuple(c.residual, c.verdict);
        },
        py::arg("rho"), py::arg("dims"), py::arg("a_plus"), py::arg("a_minus"), py::arg("tol") = Tolerances{});

    m.def(
        "certainty",
        [](const Matrix& rho, const Matrix& a, const Tolerances& tol) {
            return certainty_test(rho, a, tol).value;
        },
        py::arg("rho"), py::arg("a"), py::arg("tol") = Tolerances{});

    m.def(
        "partial_trace",
        [](const Matrix& rho, std::pair<Index, Index> dims, const std::string& traced) {
            if (traced != "plus" && traced != "minus") throw Error(ErrorCode::InvalidInput, "side is plus or minus");
            return partial_trace(rho, to_dims(dims), traced == "plus" ? Side::Plus : Side::Minus);
        },
        py::arg("rho"), py::arg("dims"), py::arg("traced"));

    m.def(
        "example_state",
        [](const std::string& name, const std::vector<double>& weights) {
            const SpinScenario s{parse_scenario(name), weights};
            const BipartiteState state = build_scenario(s);
            return py::make_tuple(state.rho(), py::make_tuple(state.dims().plus, state.dims().minus));
        },
        py::arg("name"), py::arg("weights") = std::vector<double>{});

    m.def("scenarios", [] {
        std::vector<std::string> out;
        for (Scenario s : all_scenarios()) out.emplace_back(to_string(s));
        return out;
    });

    m.def(
        "coupled_basis",
        [](int two_j1, int two_j2) {
            const CoupledBasis b = coupled_basis(two_j1, two_j2);
            std::vector<std::pair<int, int>> labels;
            for (const CoupledLabel& l : b.labels) labels.emplace_back(l.two_s, l.two_m);
            return py::make_tuple(b.unitary, labels);
        },
        py::arg("two_j1"), py::arg("two_j2"));

    // Report documents come back as JSON text; the package decodes them.
    m.def(
        "solve_report",
        [](const Matrix& rho, std::pair<Index, Index> dims, const Tolerances& tol,
           const std::optional<std::string>& scenario) {
            return solve_report(make_state(rho, dims, tol), maybe_scenario(scenario)).document.dump();
        },
        py::arg("rho"), py::arg("dims"), py::arg("tol") = Tolerances{}, py::arg("scenario") = py::none());
    m.def(
        "analyze_report",
        [](const Matrix& rho, std::pair<Index, Index> dims, const Tolerances& tol, std::uint64_t seed) {
            return analyze_report(make_state(rho, dims, tol), seed).document.dump();
        },
        py::arg("rho"), py::arg("dims"), py::arg("tol") = Tolerances{}, py::arg("seed") = 0);
    m.def(
        "measure_report",
        [](const Matrix& rho, std::pair<Index, Index> dims, const Matrix& a_plus, const Matrix& a_minus,
           const Tolerances& tol) {
            return measure_report(make_state(rho, dims, tol), make_pair(a_plus, a_minus, tol.herm_tol))
                .document.dump();
        },
        py::arg("rho"), py::arg("dims"), py::arg("a_plus"), py::arg("a_minus"), py::arg("tol") = Tolerances{});

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args, const std::string& input) {
            std::istringstream in(input);
            std::ostringstream out, err;
            const int code = run_cli(args, in, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), py::arg("stdin") = "");
}
