#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "complab/completeness.hpp"
#include "complab/config.hpp"
#include "complab/experiments.hpp"
#include "complab/potential.hpp"
#include "complab/solver.hpp"
#include "complab/specfun.hpp"

namespace py = pybind11;
using namespace complab;

namespace {

py::dict wave_dict(const WaveValues& w)
{
    py::dict d;
    d["f"] = w.f;
    d["fp"] = w.fp;
    d["g"] = w.g;
    d["gp"] = w.gp;
    return d;
}

py::dict report_dict(const RunReport& r)
{
    py::list checks;
    for (const Check& c : r.checks) {
        py::dict d;
        d["name"] = c.name;
        d["criterion"] = c.criterion;
        d["measured"] = c.measured;
        d["threshold"] = c.threshold;
        d["relation"] = c.relation;
        d["passed"] = c.passed;
        checks.append(d);
    }
    py::dict d;
    d["experiment"] = r.experiment;
    d["label"] = r.label;
    d["checks"] = checks;
    d["artifacts"] = r.artifacts;
    d["passed"] = r.passed();
    d["text"] = r.to_text();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Radial Schroedinger completeness experiments";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SpecfunError>(m, "SpecfunError", PyExc_ArithmeticError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def_readonly("ell", &PotentialSpec::ell)
        .def_readonly("Vc", &PotentialSpec::Vc)
        .def_readonly("R0", &PotentialSpec::R0)
        .def_readonly("family", &PotentialSpec::family_tag)
        .def("is_free", &PotentialSpec::is_free)
        .def("has_nonlocal", &PotentialSpec::has_nonlocal)
        .def("__repr__", [](const PotentialSpec& s) {
            return "<PotentialSpec " + s.family_tag + " ell=" + std::to_string(s.ell) + " Vc=" + std::to_string(s.Vc) +
                   " R0=" + std::to_string(s.R0) + ">";
        });

    m.def("free_particle", &free_particle, py::arg("ell") = 0.0, py::arg("R0") = 1.0);
    m.def("square_well", &square_well, py::arg("depth"), py::arg("R0"), py::arg("Vc") = 0.0, py::arg("ell") = 0.0);
    m.def("woods_saxon", &woods_saxon, py::arg("depth"), py::arg("radius"), py::arg("diffuseness"), py::arg("R0"),
          py::arg("Vc") = 0.0, py::arg("ell") = 0.0);
    m.def("pure_coulomb", &pure_coulomb, py::arg("Vc"), py::arg("ell") = 0.0, py::arg("R0") = 1.0);
    m.def("gaussian_nonlocal", &gaussian_nonlocal, py::arg("strength"), py::arg("width"), py::arg("R0"),
          py::arg("ell") = 0.0, py::arg("Vc") = 0.0);
    m.def("composite", &composite, py::arg("parts"));

    m.def(
        "coulomb_wave",
        [](double ell, double eta, double rho) { return wave_dict(coulomb_wave(CoulombParams{ell, eta}, rho)); },
        py::arg("ell"), py::arg("eta"), py::arg("rho"));
    m.def(
        "riccati_bessel", [](double ell, double x) { return wave_dict(riccati_bessel(ell, x)); }, py::arg("ell"),
        py::arg("x"));
    m.def("bessel_zeros", &bessel_zeros, py::arg("ell"), py::arg("R"), py::arg("count"));

    m.def(
        "find_box_momenta", [](const PotentialSpec& s, double R, double k_max) { return find_box_momenta(s, R, k_max); },
        py::arg("spec"), py::arg("R"), py::arg("k_max"), py::call_guard<py::gil_scoped_release>());
    m.def(
        "find_box_kappas", [](const PotentialSpec& s, double R) { return find_box_kappas(s, R); }, py::arg("spec"),
        py::arg("R"), py::call_guard<py::gil_scoped_release>());

    m.def(
        "abel_sum",
        [](double f, double x, double a, long M) {
            const AbelResult r = abel_sum(f, x, a, M);
            return py::make_tuple(r.direct, r.accelerated);
        },
        py::arg("f"), py::arg("x"), py::arg("a"), py::arg("M"));
    m.def("coulomb_delta_kernel", &coulomb_delta_kernel, py::arg("ell"), py::arg("Vc"), py::arg("r"), py::arg("rp"),
          py::arg("K"));
    m.def("coulomb_delta_kernel_free", &coulomb_delta_kernel_free, py::arg("r"), py::arg("rp"), py::arg("K"));

    m.def(
        "kernel_box",
        [](const PotentialSpec& s, double R, const std::vector<double>& grid, int M, bool accelerated) {
            KernelField k;
            {
                py::gil_scoped_release release;
                k = kernel_box(s, R, grid, grid, M, accelerated);
            }
            py::list rows;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                std::vector<double> row(k.values.begin() + static_cast<std::ptrdiff_t>(i * grid.size()),
                                        k.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * grid.size()));
                rows.append(row);
            }
            return rows;
        },
        py::arg("spec"), py::arg("R"), py::arg("grid"), py::arg("M"), py::arg("accelerated") = true);

    m.def("benchmark_names", [] {
        std::vector<std::string> names;
        for (const Benchmark& b : benchmark_catalog()) names.push_back(b.name);
        return names;
    });
    m.def(
        "run_config",
        [](const std::string& ini, const std::map<std::string, std::string>& overrides) {
            ExperimentConfig cfg = ExperimentConfig::from_string(ini);
            for (const auto& [k, v] : overrides) cfg.set(k, v);
            RunReport r;
            {
                py::gil_scoped_release release;
                r = run_experiment(cfg);
            }
            return report_dict(r);
        },
        py::arg("ini"), py::arg("overrides") = std::map<std::string, std::string>{});
    m.def(
        "benchmark_config", [](const std::string& name) { return find_benchmark(name).config; }, py::arg("name"));
}
