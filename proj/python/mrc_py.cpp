#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <variant>

#include <json.hpp>

#include "mrc/comparator.hpp"
#include "mrc/error.hpp"
#include "mrc/harness.hpp"
#include "mrc/inference.hpp"
#include "mrc/optimize.hpp"
#include "mrc/rankcorr.hpp"
#include "mrc/sampling.hpp"

namespace py = pybind11;
using namespace mrc;

namespace {

// An int selects scheme 1..5; a (lower, upper) pair keeps y outside [lower, upper].
using SchemeArg = std::variant<int, std::pair<double, double>>;

SamplingScheme to_scheme(const SchemeArg& arg) {
  if (const int* k = std::get_if<int>(&arg)) return SamplingScheme::table1(*k);
  const auto& [lo, hi] = std::get<std::pair<double, double>>(arg);
  return SamplingScheme::outside(lo, hi);
}

OptimizerConfig optimizer(const py::kwargs& kw) {
  OptimizerConfig c;
  for (const auto& [key, value] : kw) {
    const auto k = key.cast<std::string>();
    if (k == "max_evals") c.max_evals = value.cast<std::size_t>();
    else if (k == "initial_step") c.initial_step = value.cast<double>();
    else if (k == "simplex_tol") c.simplex_tol = value.cast<double>();
    else if (k == "bound") c.bound = value.cast<double>();
    else if (k == "starts") c.starts = value.cast<std::vector<Beta>>();
    else if (k == "use_grid") c.use_grid = value.cast<bool>();
    else if (k == "line_polish") c.line_polish = value.cast<bool>();
    else if (k == "smoothed_bandwidth") c.smoothed_bandwidth = value.cast<double>();
    else throw InvalidArgument("optimize", "unknown optimizer option '" + k + "'");
  }
  return c;
}

py::dict fit_dict(const FitResult& f) {
  py::dict d;
  d["beta_hat"] = f.beta_hat;
  d["objective"] = f.objective.raw;
  d["normalized"] = f.objective.normalized;
  d["evals"] = f.evals;
  d["converged"] = f.converged;
  d["warnings"] = f.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Maximum rank correlation estimation under response-biased sampling";

  static py::exception<Error> mrc_error(m, "MrcError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = mrc_error;
      py::object instance = err(std::string(e.code()) + ": " + e.what());
      instance.attr("code") = e.code();
      PyErr_SetObject(mrc_error.ptr(), instance.ptr());
    }
  });

  py::class_<Dataset>(m, "Dataset")
      .def(py::init<std::vector<double>, std::vector<double>, Eigen::MatrixXd>(), py::arg("y"), py::arg("z"),
           py::arg("x"))
      .def_property_readonly("n", &Dataset::n)
      .def_property_readonly("d", &Dataset::d)
      .def_property_readonly("y", &Dataset::y)
      .def_property_readonly("z", &Dataset::z)
      .def_property_readonly("x", &Dataset::x);

  m.def("evaluate_naive", [](const Dataset& d, const Beta& b) { return evaluate_naive(d, b).raw; });
  m.def("evaluate_fast", [](const Dataset& d, const Beta& b) { return evaluate_fast(d, b).raw; });
  m.def("evaluate_weighted",
        [](const Dataset& d, const Beta& b, const std::vector<double>& w) { return evaluate_weighted(d, b, w).raw; });
  m.def(
      "evaluate_smoothed", [](const Dataset& d, const Beta& b, double h) { return evaluate_smoothed(d, b, h); },
      py::arg("data"), py::arg("beta"), py::arg("bandwidth"));

  m.def(
      "mrc_fit",
      [](const Dataset& data, const py::kwargs& kw) {
        return fit_dict(mrc_fit(data, ModelSpec::with_dim(data.d()), optimizer(kw)));
      },
      py::arg("data"), "Fit; keyword arguments set optimizer options.");

  m.def(
      "resample_fit",
      [](const Dataset& data, std::size_t replicates, std::uint64_t seed, double ci_level, const std::string& method,
         std::size_t threads, const py::kwargs& kw) {
        const auto ocfg = optimizer(kw);
        const auto spec = ModelSpec::with_dim(data.d());
        FitResult fit;
        {
          py::gil_scoped_release release;
          fit = mrc_fit(data, spec, ocfg);
        }
        ResampleConfig rc;
        rc.replicates = replicates;
        rc.seed = seed;
        rc.ci_level = ci_level;
        if (method == "normal") rc.ci_method = CiMethod::normal;
        else if (method == "percentile") rc.ci_method = CiMethod::percentile;
        else throw InvalidArgument("inference", "ci_method must be normal or percentile");
        rc.threads = threads;
        ResampleSummary s;
        {
          py::gil_scoped_release release;
          s = resample_fit(data, spec, fit, rc, ocfg);
        }
        py::dict d = fit_dict(fit);
        d["se"] = s.se;
        std::vector<std::pair<double, double>> ci;
        for (const auto& i : s.ci) ci.emplace_back(i.lower, i.upper);
        d["ci"] = ci;
        d["draws"] = s.draws;
        d["n_failed"] = s.n_failed;
        d["warnings"] = s.warnings;
        return d;
      },
      py::arg("data"), py::arg("replicates") = 500, py::arg("seed") = 20240101, py::arg("ci_level") = 0.95,
      py::arg("ci_method") = "normal", py::arg("threads") = 1);

  m.def(
      "draw_biased_sample",
      [](const SchemeArg& scheme, const std::string& error, std::size_t n, std::uint64_t seed) {
        PopulationModel model;
        model.error = ErrorDist::parse(error);
        auto s = draw_biased_sample(model, to_scheme(scheme), n, seed);
        return py::make_tuple(std::move(s.data), s.acceptance_rate);
      },
      py::arg("scheme") = 4, py::arg("error") = "normal", py::arg("n") = 200, py::arg("seed") = 20240101,
      "Table-1 design sample; returns (dataset, acceptance_rate).");

  m.def(
      "ipw_least_squares",
      [](const Dataset& data, const SchemeArg& scheme, bool intercept) {
        const auto f = ipw_least_squares(data, to_scheme(scheme), intercept);
        py::dict d;
        d["coef"] = f.coef;
        d["free_coef"] = f.free_coef();
        d["warnings"] = f.warnings;
        return d;
      },
      py::arg("data"), py::arg("scheme"), py::arg("intercept") = true);

  m.def(
      "run_scenario",
      [](const SchemeArg& scheme, const std::string& error, std::size_t n, std::size_t replications,
         std::size_t resamples, std::uint64_t seed, bool run_ipw, std::size_t threads) {
        ScenarioSpec spec;
        if (const int* k = std::get_if<int>(&scheme)) {
          spec = table1_scenario(*k, error);
        } else {
          spec = mixture_scenario();
          spec.scheme = to_scheme(scheme);
          spec.model.error = ErrorDist::parse(error);
        }
        spec.n = n;
        spec.replications = replications;
        spec.resamples = resamples;
        spec.seed = seed;
        spec.run_ipw = run_ipw;
        spec.threads = threads;
        nlohmann::ordered_json cfg = {{"scenario", spec.name}, {"n", n},          {"replications", replications},
                                      {"resamples", resamples}, {"seed", seed}, {"run_ipw", run_ipw}};
        SimulationReport report;
        {
          py::gil_scoped_release release;
          report = run_scenario(spec);
        }
        return report_json(report, cfg.dump());
      },
      py::arg("scheme") = 4, py::arg("error") = "normal", py::arg("n") = 200, py::arg("replications") = 20,
      py::arg("resamples") = 0, py::arg("seed") = 20240101, py::arg("run_ipw") = true, py::arg("threads") = 0,
      "Runs a simulation cell and returns the JSON report; a (lower, upper) scheme uses the scalar "
      "design of the mixture study.");
}
