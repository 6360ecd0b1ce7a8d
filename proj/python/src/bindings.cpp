#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reltrace/billiard.hpp"
#include "reltrace/coulomb.hpp"
#include "reltrace/errors.hpp"
#include "reltrace/kinematics.hpp"
#include "reltrace/numeric.hpp"
#include "reltrace/special_functions.hpp"
#include "reltrace/spectra.hpp"
#include "reltrace/trace_engine.hpp"

namespace py = pybind11;
using namespace reltrace;

PYBIND11_MODULE(_reltrace, m) {
    m.doc() = "Relativistic trace-formula densities of states";
    m.attr("__version__") = RELTRACE_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<CriticalCouplingError>(m, "CriticalCouplingError", PyExc_ValueError);
    py::register_exception<InvalidQuantumNumbers>(m, "InvalidQuantumNumbers", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);
    py::register_exception<DegenerateTorusError>(m, "DegenerateTorusError", PyExc_RuntimeError);

    py::class_<RelParams>(m, "RelParams")
        .def(py::init([](double mass, double c, double hbar) { return RelParams{mass, c, hbar}; }),
             py::arg("m") = 1.0, py::arg("c") = 10.0, py::arg("hbar") = 1.0)
        .def_readwrite("m", &RelParams::m)
        .def_readwrite("c", &RelParams::c)
        .def_readwrite("hbar", &RelParams::hbar)
        .def("rest_energy", &RelParams::rest_energy);

    py::enum_<Branch>(m, "Branch").value("Positive", Branch::Positive).value("Negative", Branch::Negative);

    py::class_<Level>(m, "Level")
        .def_readonly("n", &Level::n)
        .def_readonly("eps", &Level::eps)
        .def_readonly("E", &Level::E)
        .def_readonly("degeneracy", &Level::degeneracy);

    m.def("pseudo_energy", &pseudo_energy, py::arg("E"), py::arg("params"));
    m.def("physical_energy", &physical_energy, py::arg("eps"), py::arg("params"),
          py::arg("branch") = Branch::Positive);
    m.def("classical_momentum", &classical_momentum, py::arg("eps"), py::arg("params"));

    m.def("bessel_J0", &bessel_J0);
    m.def("sph_bessel_j0", &sph_bessel_j0);
    m.def(
        "theta_direct", [](double beta, double omega) { return theta_direct({beta, omega}); }, py::arg("beta"),
        py::arg("omega") = 1.0);
    m.def(
        "theta_resummed", [](double beta, double omega, int k_max) { return theta_resummed({beta, omega}, k_max); },
        py::arg("beta"), py::arg("omega") = 1.0, py::arg("k_max") = 10);

    py::class_<DensityGrid>(m, "DensityGrid")
        .def_readonly("eps", &DensityGrid::eps)
        .def_readonly("g", &DensityGrid::g)
        .def_property_readonly("system", [](const DensityGrid& d) { return d.meta.system; })
        .def_property_readonly("diagnostics", [](const DensityGrid& d) { return d.meta.diagnostics; });

    py::class_<Comparison>(m, "Comparison")
        .def_readonly("rel_L2", &Comparison::rel_L2)
        .def_readonly("max_abs", &Comparison::max_abs);

    m.def("linspace", &linspace);
    m.def(
        "broadened_density",
        [](const std::vector<Level>& levels, const std::vector<double>& grid, double sigma) {
            return broadened_density(levels, grid, sigma);
        },
        py::arg("levels"), py::arg("grid"), py::arg("sigma"));
    m.def("compare", &compare, py::arg("a"), py::arg("b"), py::arg("lo"), py::arg("hi"));
    m.def("find_peaks", &find_peaks);

    auto b = m.def_submodule("billiard", "rectangular box");
    py::class_<billiard::BoxGeometry>(b, "BoxGeometry")
        .def(py::init([](double a1, double a2, double a3, double L) { return billiard::BoxGeometry{a1, a2, a3, L}; }),
             py::arg("a1"), py::arg("a2"), py::arg("a3"), py::arg("L") = 0.0)
        .def_static("cube", &billiard::BoxGeometry::cube)
        .def("volume", &billiard::BoxGeometry::volume)
        .def("reference_length", &billiard::BoxGeometry::reference_length);
    b.def("exact_levels", &billiard::exact_levels, py::arg("geom"), py::arg("params"), py::arg("eps_max"));
    b.def(
        "exact_resummed_density",
        [](const billiard::BoxGeometry& g, const RelParams& p, const std::vector<double>& grid, int k_max,
           double sigma) { return billiard::exact_resummed_density(g, p, grid, k_max, sigma); },
        py::arg("geom"), py::arg("params"), py::arg("grid"), py::arg("k_max") = 20, py::arg("sigma") = 0.0);
    b.def("tf_density_closed", &billiard::tf_density_closed);
    b.def(
        "engine_oscillating_density",
        [](const billiard::BoxGeometry& g, const RelParams& p, const std::vector<double>& grid, int k_enum,
           double sigma) {
            const auto model = billiard::billiard_model(g, p);
            return oscillating_density(*model, grid, k_enum, p, sigma);
        },
        py::arg("geom"), py::arg("params"), py::arg("grid"), py::arg("k_enum"), py::arg("sigma") = 0.0);

    auto c = m.def_submodule("coulomb", "Klein-Gordon Coulomb levels");
    c.attr("FINE_STRUCTURE") = coulomb::kFineStructure;
    c.def(
        "energy",
        [](int n, int l, double alpha, const RelParams& p) {
            return coulomb::coulomb_energy(n, l, coulomb::CoulombParams{alpha, p});
        },
        py::arg("n"), py::arg("l"), py::arg("alpha") = coulomb::kFineStructure, py::arg("params") = RelParams{});
}
