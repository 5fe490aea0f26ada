#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "srpair/analysis.hpp"
#include "srpair/dynamics.hpp"
#include "srpair/ensemble.hpp"
#include "srpair/errors.hpp"
#include "srpair/observables.hpp"
#include "srpair/operators.hpp"
#include "srpair/oracle.hpp"
#include "srpair/params.hpp"
#include "srpair/scenario.hpp"
#include "srpair/superop.hpp"
#include "srpair/version.hpp"

namespace py = pybind11;

namespace {

srpair::BasisIndex check_basis(int i) {
  if (i < 0 || i >= srpair::kDim) {
    throw srpair::ValidationError("basis index must be 0..3");
  }
  return static_cast<srpair::BasisIndex>(i);
}

std::vector<std::string> run_scenario_json(const std::string& text) {
  const srpair::Scenario sc = srpair::Scenario::from_json(text, "<python config>");
  if (sc.kind == "lifetime") return srpair::run_lifetime(sc);
  if (sc.kind == "hbt") return srpair::run_hbt(sc);
  if (sc.kind == "sweep") return srpair::run_sweep(sc);
  if (sc.kind == "fit") return srpair::run_fit(sc);
  throw srpair::ValidationError("run_scenario_json handles lifetime, hbt, sweep and fit");
}

}  // namespace

PYBIND11_MODULE(_srpair, m) {
  m.doc() = "collective-emission simulator for a detuned emitter pair in a waveguide";
  m.attr("__version__") = srpair::kVersion;
  m.attr("HBAR_UEV_NS") = srpair::kHbarUevNs;
  m.attr("GG") = static_cast<int>(srpair::kGG);
  m.attr("GE") = static_cast<int>(srpair::kGE);
  m.attr("EG") = static_cast<int>(srpair::kEG);
  m.attr("EE") = static_cast<int>(srpair::kEE);

  py::register_exception<srpair::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<srpair::IoError>(m, "IoError", PyExc_IOError);
  py::register_exception<srpair::NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<srpair::SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def_readwrite("gamma1", &srpair::SystemParams::gamma1)
      .def_readwrite("gamma2", &srpair::SystemParams::gamma2)
      .def_readwrite("beta", &srpair::SystemParams::beta)
      .def_readwrite("delta", &srpair::SystemParams::delta)
      .def_readwrite("gamma_d", &srpair::SystemParams::gamma_d)
      .def_readwrite("gamma_p", &srpair::SystemParams::gamma_p)
      .def_readwrite("gamma_nr", &srpair::SystemParams::gamma_nr)
      .def("validate", &srpair::SystemParams::validate)
      .def("max_rate", &srpair::SystemParams::max_rate)
      .def("with_delta", &srpair::SystemParams::with_delta);

  py::class_<srpair::TimeSeries>(m, "TimeSeries")
      .def_readonly("times", &srpair::TimeSeries::times)
      .def_readonly("values", &srpair::TimeSeries::values)
      .def_readonly("kind", &srpair::TimeSeries::kind)
      .def_readonly("normalization", &srpair::TimeSeries::normalization);

  py::class_<srpair::PhotonBudget>(m, "PhotonBudget")
      .def_readonly("waveguide", &srpair::PhotonBudget::waveguide)
      .def_readonly("leaked", &srpair::PhotonBudget::leaked)
      .def_readonly("nonradiative", &srpair::PhotonBudget::nonradiative)
      .def_readonly("remaining", &srpair::PhotonBudget::remaining)
      .def("total", &srpair::PhotonBudget::total);

  py::class_<srpair::WanderingEnsemble>(m, "WanderingEnsemble")
      .def_readonly("mean_detuning", &srpair::WanderingEnsemble::mean_detuning)
      .def_readonly("sigma", &srpair::WanderingEnsemble::sigma)
      .def_readonly("detunings", &srpair::WanderingEnsemble::detunings)
      .def_readonly("weights", &srpair::WanderingEnsemble::weights);

  py::class_<srpair::DecayMetrics>(m, "DecayMetrics")
      .def_readonly("peak_time", &srpair::DecayMetrics::peak_time)
      .def_readonly("peak_value", &srpair::DecayMetrics::peak_value)
      .def_readonly("thresholds", &srpair::DecayMetrics::thresholds)
      .def_readonly("crossing_times", &srpair::DecayMetrics::crossing_times)
      .def_readonly("uncertainties", &srpair::DecayMetrics::uncertainties);

  py::class_<srpair::FitDataset>(m, "FitDataset")
      .def(py::init<>())
      .def_readwrite("mean_detuning", &srpair::FitDataset::mean_detuning)
      .def_readwrite("taus", &srpair::FitDataset::taus)
      .def_readwrite("values", &srpair::FitDataset::values)
      .def_readwrite("errors", &srpair::FitDataset::errors);

  py::class_<srpair::FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("detector_sigma", &srpair::FitOptions::detector_sigma)
      .def_readwrite("nodes", &srpair::FitOptions::nodes)
      .def_readwrite("max_iterations", &srpair::FitOptions::max_iterations)
      .def_readwrite("tolerance", &srpair::FitOptions::tolerance);

  py::class_<srpair::FitResult>(m, "FitResult")
      .def_readonly("gamma_d", &srpair::FitResult::gamma_d)
      .def_readonly("sigma", &srpair::FitResult::sigma)
      .def_readonly("residual", &srpair::FitResult::residual)
      .def_readonly("converged", &srpair::FitResult::converged)
      .def_readonly("iterations", &srpair::FitResult::iterations)
      .def_readonly("evaluations", &srpair::FitResult::evaluations)
      .def_readonly("covariance", &srpair::FitResult::covariance);

  m.def("detuning_to_angular", &srpair::detuning_to_angular, py::arg("delta_uev"),
        "detuning in ueV -> angular frequency in rad/ns");
  m.def("lowering_operator", &srpair::lowering_operator, py::arg("emitter"));
  m.def("number_operator", &srpair::number_operator, py::arg("emitter"));
  m.def("detuning_hamiltonian", &srpair::detuning_hamiltonian, py::arg("delta_uev"));
  m.def("collective_operator", &srpair::collective_operator, py::arg("gamma1"),
        py::arg("gamma2"));
  m.def(
      "basis_state", [](int i) { return srpair::basis_state(check_basis(i)); }, py::arg("index"));
  m.def("bright_state", &srpair::bright_state, py::arg("gamma1"), py::arg("gamma2"));
  m.def("dark_state", &srpair::dark_state, py::arg("gamma1"), py::arg("gamma2"));

  m.def("build_liouvillian", &srpair::build_liouvillian, py::arg("params"), py::arg("with_pump"),
        "16x16 generator of the master equation (column-stacking convention)");
  m.def(
      "steady_state",
      [](const srpair::SystemParams& params) {
        return srpair::steady_state(srpair::build_liouvillian(params, true)).rho;
      },
      py::arg("params"), "steady state under incoherent pumping (requires gamma_p > 0)");
  m.def(
      "evolve",
      [](const srpair::SystemParams& params, const srpair::Density4& rho0,
         const std::vector<double>& times) {
        const srpair::SpectralDecomposition dec =
            srpair::decompose(srpair::build_liouvillian(params, false));
        return srpair::propagate(dec, rho0, times);
      },
      py::arg("params"), py::arg("rho0"), py::arg("times"),
      "density matrices after pulsed preparation, no pump");

  m.def("intensity", &srpair::intensity, py::arg("params"), py::arg("rho"));
  m.def("intensity_trace", &srpair::intensity_trace, py::arg("params"), py::arg("rho0"),
        py::arg("times"), py::arg("normalize") = true);
  m.def("g2_trace", &srpair::g2_trace, py::arg("params"), py::arg("taus"));
  m.def("photon_budget", &srpair::photon_budget, py::arg("params"), py::arg("rho0"),
        py::arg("horizon"));

  m.def("gauss_hermite_ensemble", &srpair::gauss_hermite_ensemble, py::arg("mean"),
        py::arg("sigma"), py::arg("n_nodes"));
  m.def("wandering_average_intensity", &srpair::wandering_average_intensity, py::arg("params"),
        py::arg("ensemble"), py::arg("rho0"), py::arg("times"));
  m.def("wandering_average_g2", &srpair::wandering_average_g2, py::arg("params"),
        py::arg("ensemble"), py::arg("taus"));
  m.def(
      "convolve_irf",
      [](const srpair::TimeSeries& trace, double sigma) {
        return srpair::convolve_irf(trace, srpair::InstrumentResponse{sigma});
      },
      py::arg("trace"), py::arg("sigma"));
  m.def(
      "measured_g2",
      [](const srpair::SystemParams& params, double wander_sigma, int nodes,
         const std::vector<double>& taus, double detector_sigma) {
        return srpair::measured_g2(params, wander_sigma, nodes, taus,
                                   srpair::InstrumentResponse{detector_sigma});
      },
      py::arg("params"), py::arg("wander_sigma"), py::arg("nodes"), py::arg("taus"),
      py::arg("detector_sigma"),
      "forward model of an HBT histogram: wandering average + detector response");

  m.def("threshold_times", &srpair::threshold_times, py::arg("trace"), py::arg("thresholds"));
  m.def(
      "beat_period",
      [](const srpair::TimeSeries& trace) -> py::object {
        const std::optional<double> p = srpair::beat_period(trace);
        if (!p) return py::none();
        return py::float_(*p);
      },
      py::arg("trace"));
  m.def("fit_parameters", &srpair::fit_parameters, py::arg("datasets"), py::arg("fixed"),
        py::arg("gamma_d_init"), py::arg("sigma_init"), py::arg("options") = srpair::FitOptions{});

  m.def("run_scenario_json", &run_scenario_json, py::arg("config_json"),
        "run a lifetime/hbt/sweep/fit scenario from a JSON config string; returns written paths");

  m.def("euler_propagate", &srpair::oracle::euler_propagate, py::arg("params"), py::arg("seed"),
        py::arg("t_end"), py::arg("dt"), py::arg("with_pump"),
        "independent brute-force integrator (oracle; slow by design)");
}
