// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the main operations: field generation, populations,
// sampling, estimators, and the Monte Carlo grid.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <span>
#include <vector>

#include "mrvlab/config.hpp"
#include "mrvlab/csv.hpp"
#include "mrvlab/estimators.hpp"
#include "mrvlab/geofield.hpp"
#include "mrvlab/montecarlo.hpp"
#include "mrvlab/sampling.hpp"
#include "mrvlab/version.hpp"

namespace py = pybind11;
using namespace mrvlab;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const DoubleArray& arr) {
  const auto view = arr.unchecked();
  std::vector<double> out(static_cast<std::size_t>(arr.size()));
  std::memcpy(out.data(), arr.data(), out.size() * sizeof(double));
  (void)view;
  return out;
}

py::array_t<double> grid_array(const std::vector<double>& values, int rows, int cols) {
  return py::array_t<double>(
      {static_cast<py::ssize_t>(rows), static_cast<py::ssize_t>(cols)},
      {static_cast<py::ssize_t>(cols * sizeof(double)),
       static_cast<py::ssize_t>(sizeof(double))},
      values.data());
}

py::array_t<double> flat_array(const std::vector<double>& values) {
  return py::array_t<double>({static_cast<py::ssize_t>(values.size())},
                             {static_cast<py::ssize_t>(sizeof(double))}, values.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Design-based (HTE) and model-assisted (SRE) estimation laboratory";
  m.attr("__version__") = kVersion;
  m.attr("DEFAULT_MASTER_SEED") = py::int_(kDefaultMasterSeed);

  py::register_exception<argument_error>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<config_error>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<degenerate_input_error>(m, "DegenerateInputError", PyExc_ValueError);
  py::register_exception<insufficient_sample_error>(m, "InsufficientSampleError",
                                                    PyExc_ValueError);

  // ---- geofield ----
  py::class_<CovarianceSpec>(m, "CovarianceSpec")
      .def(py::init([](double sill, double range, double nugget) {
             CovarianceSpec spec{sill, range, nugget};
             spec.validate();
             return spec;
           }),
           py::arg("sill"), py::arg("range"), py::arg("nugget") = 0.0)
      .def_readonly("sill", &CovarianceSpec::sill)
      .def_readonly("range", &CovarianceSpec::range)
      .def_readonly("nugget", &CovarianceSpec::nugget)
      .def("__repr__", [](const CovarianceSpec& s) {
        return "CovarianceSpec(sill=" + std::to_string(s.sill) +
               ", range=" + std::to_string(s.range) + ")";
      });

  py::class_<PopulationSpec>(m, "PopulationSpec")
      .def_readonly("grid_rows", &PopulationSpec::grid_rows)
      .def_readonly("grid_cols", &PopulationSpec::grid_cols)
      .def_readonly("target_var_z", &PopulationSpec::target_var_z)
      .def_readonly("target_r2", &PopulationSpec::target_r2)
      .def_readonly("target_mean", &PopulationSpec::target_mean)
      .def_readonly("cov_x", &PopulationSpec::cov_x)
      .def_readonly("cov_delta", &PopulationSpec::cov_delta)
      .def_readonly("seed", &PopulationSpec::seed);

  m.def("make_population_spec", &make_population_spec, py::arg("grid_rows"),
        py::arg("grid_cols"), py::arg("target_var_z"), py::arg("target_r2"),
        py::arg("target_mean"), py::arg("range_x"), py::arg("range_delta"), py::arg("seed"));

  py::class_<Population>(m, "Population")
      .def_readonly("spec", &Population::spec)
      .def_property_readonly("z",
                             [](const Population& p) {
                               return grid_array(p.z, p.spec.grid_rows, p.spec.grid_cols);
                             })
      .def_property_readonly("x",
                             [](const Population& p) {
                               return grid_array(p.x, p.spec.grid_rows, p.spec.grid_cols);
                             })
      .def_property_readonly("x_uncorr",
                             [](const Population& p) {
                               return grid_array(p.x_uncorr, p.spec.grid_rows,
                                                 p.spec.grid_cols);
                             })
      .def_readonly("mu", &Population::mu)
      .def_readonly("xbar_pop", &Population::xbar_pop)
      .def_readonly("xbar_uncorr_pop", &Population::xbar_uncorr_pop)
      .def_readonly("var_z", &Population::var_z)
      .def_readonly("var_x", &Population::var_x)
      .def_readonly("var_delta", &Population::var_delta)
      .def_readonly("r2_realized", &Population::r2_realized)
      .def("size", &Population::size);

  py::enum_<FieldMethod>(m, "FieldMethod")
      .value("automatic", FieldMethod::automatic)
      .value("circulant", FieldMethod::circulant)
      .value("dense", FieldMethod::dense);

  m.def("spherical_cov", &spherical_cov, py::arg("h"), py::arg("spec"));
  m.def(
      "generate_field",
      [](const CovarianceSpec& spec, int rows, int cols, std::uint64_t seed,
         FieldMethod method) {
        return grid_array(generate_field(spec, rows, cols, seed, method), rows, cols);
      },
      py::arg("spec"), py::arg("rows"), py::arg("cols"), py::arg("seed"),
      py::arg("method") = FieldMethod::automatic);
  m.def(
      "decorrelate",
      [](const DoubleArray& x_raw, const DoubleArray& z) {
        return flat_array(decorrelate(to_vector(x_raw), to_vector(z)));
      },
      py::arg("x_raw"), py::arg("z"));
  m.def("build_population", &build_population, py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "semivariogram",
      [](const DoubleArray& field, int rows, int cols,
         const std::vector<std::pair<int, int>>& offsets) {
        return semivariogram(to_vector(field), rows, cols, offsets);
      },
      py::arg("field"), py::arg("rows"), py::arg("cols"), py::arg("offsets"));
  m.def("dump_population_csv", &dump_population_csv, py::arg("population"), py::arg("path"));

  // ---- sampling ----
  py::class_<Sample>(m, "Sample")
      .def_readonly("n", &Sample::n)
      .def_property_readonly("cell_indices",
                             [](const Sample& s) {
                               return py::array_t<std::int64_t>(
                                   {static_cast<py::ssize_t>(s.cell_indices.size())},
                                   {static_cast<py::ssize_t>(sizeof(std::int64_t))},
                                   s.cell_indices.data());
                             })
      .def_property_readonly("z", [](const Sample& s) { return flat_array(s.z); })
      .def_property_readonly("x", [](const Sample& s) { return flat_array(s.x); })
      .def_property_readonly("x_uncorr",
                             [](const Sample& s) { return flat_array(s.x_uncorr); });

  m.def("srs_sample", &srs_sample, py::arg("population"), py::arg("n"), py::arg("seed"));

  // ---- estimators ----
  py::enum_<EstimatorKind>(m, "EstimatorKind")
      .value("HTE", EstimatorKind::hte)
      .value("SRE", EstimatorKind::sre);
  py::enum_<VarianceMethod>(m, "VarianceMethod")
      .value("naive", VarianceMethod::naive)
      .value("gweight", VarianceMethod::gweight);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("method", &Estimate::method)
      .def_readonly("point", &Estimate::point)
      .def_readonly("variance", &Estimate::variance)
      .def_readonly("variance_method", &Estimate::variance_method)
      .def_readonly("n", &Estimate::n)
      .def_readonly("df", &Estimate::df)
      .def("__repr__", [](const Estimate& e) {
        return to_string(e.method) + "(point=" + std::to_string(e.point) +
               ", variance=" + std::to_string(e.variance) + ")";
      });

  py::class_<RegressionFit>(m, "RegressionFit")
      .def_readonly("intercept", &RegressionFit::intercept)
      .def_readonly("slope", &RegressionFit::slope)
      .def_property_readonly("residuals",
                             [](const RegressionFit& f) { return flat_array(f.residuals); })
      .def_readonly("xbar_sample", &RegressionFit::xbar_sample)
      .def_readonly("zbar_sample", &RegressionFit::zbar_sample);

  py::class_<ConfidenceInterval>(m, "ConfidenceInterval")
      .def_readonly("lower", &ConfidenceInterval::lower)
      .def_readonly("upper", &ConfidenceInterval::upper)
      .def_readonly("alpha", &ConfidenceInterval::alpha)
      .def("contains", &ConfidenceInterval::contains, py::arg("value"));

  m.def("hte", [](const DoubleArray& z) { return hte(to_vector(z)); }, py::arg("z"));
  m.def(
      "ols_fit",
      [](const DoubleArray& x, const DoubleArray& z) {
        return ols_fit(to_vector(x), to_vector(z));
      },
      py::arg("x"), py::arg("z"));
  m.def(
      "sre",
      [](const DoubleArray& x, const DoubleArray& z, double xbar_pop, VarianceMethod method) {
        return sre(to_vector(x), to_vector(z), xbar_pop, method);
      },
      py::arg("x"), py::arg("z"), py::arg("xbar_pop"),
      py::arg("variance_method") = VarianceMethod::gweight);
  m.def("sre_variance_naive", &sre_variance_naive, py::arg("fit"), py::arg("n"));
  m.def(
      "sre_variance_gweight",
      [](const DoubleArray& x, const RegressionFit& fit, double xbar_pop) {
        return sre_variance_gweight(to_vector(x), fit, xbar_pop);
      },
      py::arg("x"), py::arg("fit"), py::arg("xbar_pop"));
  m.def("confidence_interval",
        py::overload_cast<double, double, int, double>(&confidence_interval),
        py::arg("point"), py::arg("variance"), py::arg("df"), py::arg("alpha"));
  m.def("t_quantile", &t_quantile, py::arg("p"), py::arg("df"));

  // ---- montecarlo ----
  py::class_<ScenarioSpec>(m, "ScenarioSpec")
      .def(py::init([](double variance, double r2, int n, EstimatorKind estimator,
                       int replicates, std::uint64_t master_seed, double alpha) {
             return ScenarioSpec{variance, r2, n, estimator, replicates, master_seed, alpha};
           }),
           py::arg("population_variance"), py::arg("r2"), py::arg("sample_size"),
           py::arg("estimator"), py::arg("replicates"), py::arg("master_seed"),
           py::arg("alpha") = 0.05)
      .def_readonly("population_variance", &ScenarioSpec::population_variance)
      .def_readonly("r2", &ScenarioSpec::r2)
      .def_readonly("sample_size", &ScenarioSpec::sample_size)
      .def_readonly("estimator", &ScenarioSpec::estimator)
      .def_readonly("replicates", &ScenarioSpec::replicates)
      .def_readonly("master_seed", &ScenarioSpec::master_seed)
      .def_readonly("alpha", &ScenarioSpec::alpha)
      .def("id", &ScenarioSpec::id);

  py::class_<ReplicateRecord>(m, "ReplicateRecord")
      .def_readonly("estimate", &ReplicateRecord::estimate)
      .def_readonly("variance_estimate", &ReplicateRecord::variance_estimate)
      .def_readonly("ci_lower", &ReplicateRecord::ci_lower)
      .def_readonly("ci_upper", &ReplicateRecord::ci_upper)
      .def_readonly("covered", &ReplicateRecord::covered);

  py::class_<BiasTest>(m, "BiasTest")
      .def_readonly("bias", &BiasTest::bias)
      .def_readonly("t_statistic", &BiasTest::t_statistic)
      .def_readonly("p_value", &BiasTest::p_value);

  py::class_<CoverageEstimate>(m, "CoverageEstimate")
      .def_readonly("coverage", &CoverageEstimate::coverage)
      .def_readonly("mc_se", &CoverageEstimate::mc_se);

  py::class_<ScenarioMetrics>(m, "ScenarioMetrics")
      .def_readonly("population_variance", &ScenarioMetrics::population_variance)
      .def_readonly("r2", &ScenarioMetrics::r2)
      .def_readonly("sample_size", &ScenarioMetrics::sample_size)
      .def_readonly("estimator", &ScenarioMetrics::estimator)
      .def_readonly("replicates", &ScenarioMetrics::replicates)
      .def_readonly("empirical_bias", &ScenarioMetrics::empirical_bias)
      .def_readonly("t_statistic", &ScenarioMetrics::t_statistic)
      .def_readonly("p_value", &ScenarioMetrics::p_value)
      .def_readonly("significant", &ScenarioMetrics::significant)
      .def_readonly("coverage", &ScenarioMetrics::coverage)
      .def_readonly("coverage_mc_se", &ScenarioMetrics::coverage_mc_se)
      .def_readonly("mc_sampling_variance", &ScenarioMetrics::mc_sampling_variance)
      .def_readonly("precision_gain", &ScenarioMetrics::precision_gain);

  m.def("population_seed", &population_seed, py::arg("master_seed"),
        py::arg("population_variance"));
  m.def("replicate_seed", &replicate_seed, py::arg("master_seed"),
        py::arg("population_variance"), py::arg("sample_size"), py::arg("replicate_index"));
  m.def(
      "empirical_bias",
      [](const DoubleArray& estimates, double mu) {
        return empirical_bias(to_vector(estimates), mu);
      },
      py::arg("estimates"), py::arg("mu"));
  m.def(
      "empirical_coverage",
      [](const std::vector<ReplicateRecord>& records) {
        return empirical_coverage(records);
      },
      py::arg("records"));
  m.def(
      "precision_gain",
      [](const DoubleArray& sre_estimates, const DoubleArray& hte_estimates) {
        return precision_gain(to_vector(sre_estimates), to_vector(hte_estimates));
      },
      py::arg("sre_estimates"), py::arg("hte_estimates"));
  m.def(
      "mc_variance",
      [](const DoubleArray& estimates) { return mc_variance(to_vector(estimates)); },
      py::arg("estimates"));
  m.def("run_scenario", &run_scenario, py::arg("spec"), py::arg("population"),
        py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def(
      "summarize_scenario",
      [](const ScenarioSpec& spec, const std::vector<ReplicateRecord>& records, double mu,
         const DoubleArray& paired_hte_estimates) {
        return summarize_scenario(spec, records, mu, to_vector(paired_hte_estimates));
      },
      py::arg("spec"), py::arg("records"), py::arg("mu"),
      py::arg("paired_hte_estimates") = DoubleArray(0));

  py::class_<GridConfig>(m, "GridConfig")
      .def(py::init<>())
      .def_readwrite("variances", &GridConfig::variances)
      .def_readwrite("sample_sizes", &GridConfig::sample_sizes)
      .def_readwrite("r2_values", &GridConfig::r2_values)
      .def_readwrite("replicates", &GridConfig::replicates)
      .def_readwrite("master_seed", &GridConfig::master_seed)
      .def_readwrite("grid_rows", &GridConfig::grid_rows)
      .def_readwrite("grid_cols", &GridConfig::grid_cols)
      .def_readwrite("range_x", &GridConfig::range_x)
      .def_readwrite("range_delta", &GridConfig::range_delta)
      .def_readwrite("target_mean", &GridConfig::target_mean)
      .def_readwrite("alpha", &GridConfig::alpha)
      .def_readwrite("threads", &GridConfig::threads)
      .def("population_spec_for", &GridConfig::population_spec_for,
           py::arg("population_variance"));

  py::class_<ScenarioFailure>(m, "ScenarioFailure")
      .def_readonly("scenario_id", &ScenarioFailure::scenario_id)
      .def_readonly("message", &ScenarioFailure::message);

  py::class_<GridResult>(m, "GridResult")
      .def_readonly("metrics", &GridResult::metrics)
      .def_readonly("failures", &GridResult::failures);

  m.def(
      "run_grid",
      [](const GridConfig& config, bool verbose) {
        const py::gil_scoped_release release;
        return run_grid(config, verbose
                                    ? [](const std::string& line) {
                                        std::fprintf(stderr, "[mrvlab] %s\n", line.c_str());
                                      }
                                    : std::function<void(const std::string&)>());
      },
      py::arg("config"), py::arg("verbose") = false);

  m.def("emit_bias_table", &emit_bias_table, py::arg("metrics"), py::arg("path"));
  m.def("emit_figure_data", &emit_figure_data, py::arg("metrics"), py::arg("out_dir"));
}
