// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo evaluation of the estimators over a scenario grid.
//
// A scenario is (population variance, covariate choice, sample size,
// estimator).  Within one (variance, sample size) cell all estimators are
// evaluated on the same sample draws: replicate seeds depend only on
// (master seed, variance, sample size, replicate index), so HTE and both
// SRE variants are paired and precision gains are variance ratios over a
// shared sample stream.  Metrics are aggregated in fixed replicate order,
// which makes results bitwise-identical across thread counts.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mrvlab/estimators.hpp"
#include "mrvlab/geofield.hpp"

namespace mrvlab {

struct ScenarioSpec {
  double population_variance = 900.0;
  double r2 = 0.3;  // covariate choice for SRE: 0 -> x_uncorr, else x
  int sample_size = 40;
  EstimatorKind estimator = EstimatorKind::hte;
  int replicates = 2000;
  std::uint64_t master_seed = 0;
  double alpha = 0.05;

  std::string id() const;
};

/// One replicate's estimation result.
struct ReplicateRecord {
  double estimate = 0.0;
  double variance_estimate = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  bool covered = false;  // true iff ci_lower <= mu <= ci_upper
};

struct BiasTest {
  double bias = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
};

struct CoverageEstimate {
  double coverage = 0.0;
  double mc_se = 0.0;
};

/// Per-scenario Monte Carlo summary.
struct ScenarioMetrics {
  double population_variance = 0.0;
  double r2 = 0.0;  // 0 for HTE rows
  int sample_size = 0;
  EstimatorKind estimator = EstimatorKind::hte;
  int replicates = 0;

  double empirical_bias = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;  // at alpha = 0.05
  double coverage = 0.0;
  double coverage_mc_se = 0.0;
  double mc_sampling_variance = 0.0;           // divisor M-1 over the estimates
  std::optional<double> precision_gain;        // SRE rows only: V_M(SRE)/V_M(HTE)
};

/// Deterministic stream seeds.  The replicate seed does not depend on the
/// estimator, which is what pairs the estimators within a cell.
std::uint64_t population_seed(std::uint64_t master_seed, double population_variance);
std::uint64_t replicate_seed(std::uint64_t master_seed, double population_variance,
                             int sample_size, int replicate_index);

/// Mean bias with a two-tailed t-test against zero bias (df = M-1).
/// Throws insufficient_sample_error for M < 2.
BiasTest empirical_bias(std::span<const double> estimates, double mu);

/// Fraction of replicates whose CI covered mu, with binomial MC standard
/// error.  Throws argument_error on empty input.
CoverageEstimate empirical_coverage(std::span<const ReplicateRecord> records);

/// Monte Carlo variance of the estimates (divisor M-1).
double mc_variance(std::span<const double> estimates);

/// Ratio of Monte Carlo sampling variances, SRE over HTE, replicate-paired.
/// Throws degenerate_input_error when the HTE MC variance is zero.
double precision_gain(std::span<const double> sre_estimates,
                      std::span<const double> hte_estimates);

/// Runs one scenario: M replicates of draw-sample / estimate / CI.
/// Deterministic for fixed seeds regardless of thread count.
std::vector<ReplicateRecord> run_scenario(const ScenarioSpec& spec, const Population& pop,
                                          int threads = 0);

/// Metrics for one scenario's records.  For SRE rows pass the paired HTE
/// estimates (same replicate seeds) so the precision gain can be computed;
/// pass an empty span for HTE rows.
ScenarioMetrics summarize_scenario(const ScenarioSpec& spec,
                                   std::span<const ReplicateRecord> records, double mu,
                                   std::span<const double> paired_hte_estimates);

struct GridConfig {
  std::vector<double> variances = {100, 500, 900, 1300, 1700, 2100};
  std::vector<int> sample_sizes = {5, 10, 20, 40, 80, 160, 320, 640, 1280, 2560, 5120};
  std::vector<double> r2_values = {0.0, 0.3};  // SRE covariate choices
  int replicates = 2000;
  std::uint64_t master_seed = 0;
  int grid_rows = 512;
  int grid_cols = 512;
  double range_x = 40.0;
  double range_delta = 15.0;
  double target_mean = 1.0;
  double alpha = 0.05;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
  /// Population used for one variance level (shared by all sample sizes
  /// and estimators at that level).
  PopulationSpec population_spec_for(double population_variance) const;
};

struct ScenarioFailure {
  std::string scenario_id;
  std::string message;
};

struct GridResult {
  std::vector<ScenarioMetrics> metrics;    // row order: variance, n, estimator
  std::vector<ScenarioFailure> failures;   // failed scenarios; the rest still run
};

/// Runs the full grid: for each variance level builds one population, then
/// for each sample size evaluates HTE plus one SRE per requested covariate
/// choice on shared sample draws.
GridResult run_grid(const GridConfig& config,
                    const std::function<void(const std::string&)>& log = {});

}  // namespace mrvlab
