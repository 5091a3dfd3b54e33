#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mg1tail/approximations.hpp"
#include "mg1tail/cli.hpp"
#include "mg1tail/errors.hpp"
#include "mg1tail/geom_sums.hpp"
#include "mg1tail/light_tails.hpp"
#include "mg1tail/mc_oracle.hpp"
#include "mg1tail/model_spec.hpp"
#include "mg1tail/transition.hpp"

namespace py = pybind11;
using namespace mg1tail;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tail approximations for the M/G/1 waiting time";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<NoCrossingError>(m, "NoCrossingError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<IntegratedTailModel>(m, "IntegratedTailModel")
      .def_static("pareto", &IntegratedTailModel::pareto, py::arg("alpha"))
      .def_static("exponential", &IntegratedTailModel::exponential, py::arg("rate"))
      .def_static("lattice", &IntegratedTailModel::lattice, py::arg("spacing"), py::arg("mass"))
      .def_static("parse", [](const std::string& s) { return parse_model(s); }, py::arg("literal"))
      .def("describe", &IntegratedTailModel::describe)
      .def("__repr__", [](const IntegratedTailModel& model) { return "IntegratedTailModel('" + model.describe() + "')"; });

  py::class_<QueueModel>(m, "QueueModel")
      .def(py::init<IntegratedTailModel, double>(), py::arg("model"), py::arg("rho"))
      .def_property_readonly("model", &QueueModel::model)
      .def_property_readonly("rho", &QueueModel::rho)
      .def_property_readonly("mu", &QueueModel::mu);

  m.def("tail_prob", &tail_prob, py::arg("model"), py::arg("x"));
  m.def("mean_integrated", &mean_integrated, py::arg("model"));
  m.def("variance_integrated", &variance_integrated, py::arg("model"));
  m.def("sample_x", &sample_x, py::arg("model"), py::arg("u"));

  m.def("heavy_traffic", &heavy_traffic, py::arg("q"), py::arg("x"));
  m.def("heavy_tail", &heavy_tail, py::arg("q"), py::arg("x"));
  m.def("big_m", &big_m, py::arg("q"), py::arg("x"));
  m.def("s_sum", &s_sum, py::arg("q"), py::arg("x"));
  m.def("h_approx", &h_approx, py::arg("q"), py::arg("x"));
  m.def("gamma_factor", &gamma_factor, py::arg("q"), py::arg("x"));
  m.def("j_approx", &j_approx, py::arg("q"), py::arg("x"));
  m.def("t_tail", &t_tail, py::arg("q"), py::arg("x"));
  m.def("t_tail_z", &t_tail_z, py::arg("q"), py::arg("x"));
  m.def("h_clt", &h_clt, py::arg("q"), py::arg("x"));
  m.def("subexp_sum_approx", &subexp_sum_approx, py::arg("model"), py::arg("n"), py::arg("x"));

  py::enum_<Regime>(m, "Regime")
      .value("HeavyTraffic", Regime::HeavyTraffic)
      .value("Transition", Regime::Transition)
      .value("HeavyTail", Regime::HeavyTail);
  py::class_<RegimeReport>(m, "RegimeReport")
      .def_readonly("c_value", &RegimeReport::c_value)
      .def_readonly("regime", &RegimeReport::regime)
      .def_readonly("threshold_x", &RegimeReport::threshold_x)
      .def_readonly("kappa", &RegimeReport::kappa);
  m.def("kappa", &kappa, py::arg("model"));
  m.def("threshold_x", &threshold_x, py::arg("q"), py::arg("c") = 1.0);
  m.def(
      "threshold_rho",
      [](const IntegratedTailModel& model, double x, double c) {
        const auto r = threshold_rho(model, x, c);
        return py::make_tuple(r.value, r.in_range);
      },
      py::arg("model"), py::arg("x"), py::arg("c") = 1.0, "Returns (rho_hat, in_range).");
  m.def("regime_classify", &regime_classify, py::arg("q"), py::arg("x"), py::arg("band") = 0.1);
  m.def("crossing_point", &crossing_point, py::arg("q"));

  m.def("adjustment_coefficient", [](const IntegratedTailModel& model, double rho) {
    return adjustment_coefficient(model, rho).theta_star;
  }, py::arg("model"), py::arg("rho"));
  m.def("cramer_lundberg_tail", &cramer_lundberg_tail, py::arg("model"), py::arg("rho"), py::arg("x"));
  m.def("corrected_heavy_traffic", &corrected_heavy_traffic, py::arg("model"), py::arg("rho"), py::arg("x_scaled"));

  py::class_<GeomModel>(m, "GeomModel")
      .def_static("pareto", &GeomModel::pareto, py::arg("beta_y"), py::arg("p"))
      .def_property_readonly("p", &GeomModel::p)
      .def_property_readonly("mu", &GeomModel::mu)
      .def_property_readonly("tau", &GeomModel::tau)
      .def("to_queue_model", &GeomModel::to_queue_model);
  m.def("geom_gamma", &geom_gamma, py::arg("g"), py::arg("x"));
  m.def("geom_tail_approx", &geom_tail_approx, py::arg("g"), py::arg("x"));
  m.def("geom_threshold", &geom_threshold, py::arg("g"), py::arg("c") = 1.0);

  py::class_<SimulationEstimate>(m, "SimulationEstimate")
      .def_readonly("estimate", &SimulationEstimate::estimate)
      .def_readonly("half_width", &SimulationEstimate::half_width)
      .def_readonly("rel_err", &SimulationEstimate::rel_err)
      .def_readonly("n_samples", &SimulationEstimate::n_samples)
      .def_readonly("seed", &SimulationEstimate::seed)
      .def_readonly("converged", &SimulationEstimate::converged)
      .def_property_readonly("method", [](const SimulationEstimate& e) { return std::string(to_string(e.method)); })
      .def("covers", &SimulationEstimate::covers, py::arg("value"));
  py::class_<PkExact>(m, "PkExact")
      .def_readonly("value", &PkExact::value)
      .def_readonly("lower", &PkExact::lower)
      .def_readonly("upper", &PkExact::upper)
      .def_readonly("truncation_n", &PkExact::truncation_n)
      .def_readonly("truncation_bound", &PkExact::truncation_bound);

  m.def(
      "pk_truncated",
      [](const QueueModel& q, double x, double tol, double spacing) {
        PkOptions o;
        o.tol = tol;
        o.spacing = spacing;
        py::gil_scoped_release release;
        return pk_truncated(q, x, o);
      },
      py::arg("q"), py::arg("x"), py::arg("tol") = 1e-10, py::arg("spacing") = 0.01);
  m.def(
      "crude_mc",
      [](const QueueModel& q, double x, std::uint64_t n_samples, std::uint64_t seed) {
        py::gil_scoped_release release;
        return crude_mc(q, x, n_samples, seed);
      },
      py::arg("q"), py::arg("x"), py::arg("n_samples"), py::arg("seed") = 0);
  m.def(
      "ak_estimate",
      [](const QueueModel& q, double x, double target_rel_err, double confidence, std::uint64_t seed,
         std::uint64_t max_samples) {
        AkOptions o;
        o.target_rel_err = target_rel_err;
        o.confidence = confidence;
        o.seed = seed;
        o.max_samples = max_samples;
        py::gil_scoped_release release;
        return ak_estimate(q, x, o);
      },
      py::arg("q"), py::arg("x"), py::arg("target_rel_err") = 0.05, py::arg("confidence") = 0.99, py::arg("seed") = 0,
      py::arg("max_samples") = 100'000'000);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line interface; returns (exit_code, stdout, stderr).");
  m.attr("__version__") = cli::version();
}
