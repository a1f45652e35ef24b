// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mrvlab/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "mrvlab/errors.hpp"
#include "mrvlab/numeric.hpp"
#include "mrvlab/rng.hpp"
#include "mrvlab/sampling.hpp"
#include "mrvlab/special_functions.hpp"

namespace mrvlab {

namespace {

constexpr std::uint64_t kTagPopulation = 0x6D63706F70ull;
constexpr std::uint64_t kTagReplicate = 0x6D63726570ull;

// One estimator variant evaluated within a (variance, sample size) cell.
struct VariantPlan {
  EstimatorKind kind = EstimatorKind::hte;
  double r2 = 0.0;          // covariate choice for SRE rows
  bool use_uncorr = false;  // SRE with the decorrelated covariate
};

std::vector<VariantPlan> make_plans(std::vector<double> r2_values) {
  std::sort(r2_values.begin(), r2_values.end());
  std::vector<VariantPlan> plans;
  plans.push_back(VariantPlan{EstimatorKind::hte, 0.0, false});
  for (double r2 : r2_values)
    plans.push_back(VariantPlan{EstimatorKind::sre, r2, r2 == 0.0});
  return plans;
}

ReplicateRecord evaluate_replicate(const VariantPlan& plan, const Sample& sample,
                                   const Population& pop, double alpha) {
  Estimate est;
  if (plan.kind == EstimatorKind::hte) {
    est = hte(sample.z);
  } else if (plan.use_uncorr) {
    est = sre(sample.x_uncorr, sample.z, pop.xbar_uncorr_pop, VarianceMethod::gweight);
  } else {
    est = sre(sample.x, sample.z, pop.xbar_pop, VarianceMethod::gweight);
  }
  const ConfidenceInterval ci = confidence_interval(est, alpha);
  return ReplicateRecord{est.point, est.variance, ci.lower, ci.upper, ci.contains(pop.mu)};
}

std::vector<double> extract_estimates(std::span<const ReplicateRecord> records) {
  std::vector<double> estimates(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) estimates[i] = records[i].estimate;
  return estimates;
}

void check_population_matches(const ScenarioSpec& spec, const Population& pop) {
  const double tol = 1e-9 * std::max(1.0, spec.population_variance);
  if (std::fabs(pop.spec.target_var_z - spec.population_variance) > tol)
    throw argument_error("run_scenario: population variance does not match the scenario");
  if (spec.estimator == EstimatorKind::sre && spec.r2 > 0.0 &&
      std::fabs(pop.spec.target_r2 - spec.r2) > 1e-9)
    throw argument_error("run_scenario: population r2 does not match the scenario covariate");
}

}  // namespace

std::string ScenarioSpec::id() const {
  char buf[128];
  if (estimator == EstimatorKind::hte)
    std::snprintf(buf, sizeof(buf), "var=%g n=%d HTE", population_variance, sample_size);
  else
    std::snprintf(buf, sizeof(buf), "var=%g n=%d SRE(r2=%g)", population_variance, sample_size,
                  r2);
  return buf;
}

std::uint64_t population_seed(std::uint64_t master_seed, double population_variance) {
  return derive_seed(master_seed, {kTagPopulation, seed_word(population_variance)});
}

std::uint64_t replicate_seed(std::uint64_t master_seed, double population_variance,
                             int sample_size, int replicate_index) {
  return derive_seed(master_seed,
                     {kTagReplicate, seed_word(population_variance),
                      static_cast<std::uint64_t>(sample_size),
                      static_cast<std::uint64_t>(replicate_index)});
}

BiasTest empirical_bias(std::span<const double> estimates, double mu) {
  const std::size_t m = estimates.size();
  if (m < 2) throw insufficient_sample_error("empirical_bias: needs at least 2 replicates");
  BiasTest out;
  out.bias = mean(estimates) - mu;
  const double sd = std::sqrt(sample_variance(estimates));
  if (sd == 0.0) {
    out.t_statistic = 0.0;
    out.p_value = 1.0;
    if (out.bias != 0.0) {
      out.t_statistic = std::copysign(HUGE_VAL, out.bias);
      out.p_value = 0.0;
    }
    return out;
  }
  out.t_statistic = out.bias / (sd / std::sqrt(static_cast<double>(m)));
  out.p_value = student_t_two_tailed_p(out.t_statistic, static_cast<double>(m - 1));
  return out;
}

CoverageEstimate empirical_coverage(std::span<const ReplicateRecord> records) {
  if (records.empty()) throw argument_error("empirical_coverage: no replicates");
  std::size_t covered = 0;
  for (const auto& r : records) covered += r.covered ? 1 : 0;
  CoverageEstimate out;
  out.coverage = static_cast<double>(covered) / static_cast<double>(records.size());
  out.mc_se = std::sqrt(out.coverage * (1.0 - out.coverage) /
                        static_cast<double>(records.size()));
  return out;
}

double mc_variance(std::span<const double> estimates) {
  if (estimates.size() < 2)
    throw insufficient_sample_error("mc_variance: needs at least 2 replicates");
  return sample_variance(estimates);
}

double precision_gain(std::span<const double> sre_estimates,
                      std::span<const double> hte_estimates) {
  if (sre_estimates.size() != hte_estimates.size() || sre_estimates.size() < 2)
    throw argument_error("precision_gain: needs paired arrays of length >= 2");
  const double hte_var = mc_variance(hte_estimates);
  if (hte_var == 0.0)
    throw degenerate_input_error("precision_gain: HTE Monte Carlo variance is zero");
  return mc_variance(sre_estimates) / hte_var;
}

std::vector<ReplicateRecord> run_scenario(const ScenarioSpec& spec, const Population& pop,
                                          int threads) {
  if (spec.replicates < 1) throw argument_error("run_scenario: replicates must be >= 1");
  check_population_matches(spec, pop);

  VariantPlan plan;
  plan.kind = spec.estimator;
  plan.r2 = spec.estimator == EstimatorKind::sre ? spec.r2 : 0.0;
  plan.use_uncorr = spec.estimator == EstimatorKind::sre && spec.r2 == 0.0;

  std::vector<ReplicateRecord> records(spec.replicates);
  parallel_for(records.size(), threads, [&](std::size_t m) {
    const std::uint64_t seed = replicate_seed(spec.master_seed, spec.population_variance,
                                              spec.sample_size, static_cast<int>(m));
    const Sample sample = srs_sample(pop, spec.sample_size, seed);
    records[m] = evaluate_replicate(plan, sample, pop, spec.alpha);
  });
  return records;
}

ScenarioMetrics summarize_scenario(const ScenarioSpec& spec,
                                   std::span<const ReplicateRecord> records, double mu,
                                   std::span<const double> paired_hte_estimates) {
  ScenarioMetrics metrics;
  metrics.population_variance = spec.population_variance;
  metrics.r2 = spec.estimator == EstimatorKind::sre ? spec.r2 : 0.0;
  metrics.sample_size = spec.sample_size;
  metrics.estimator = spec.estimator;
  metrics.replicates = static_cast<int>(records.size());

  const std::vector<double> estimates = extract_estimates(records);
  const BiasTest bias = empirical_bias(estimates, mu);
  metrics.empirical_bias = bias.bias;
  metrics.t_statistic = bias.t_statistic;
  metrics.p_value = bias.p_value;
  metrics.significant = bias.p_value < spec.alpha;

  const CoverageEstimate cov = empirical_coverage(records);
  metrics.coverage = cov.coverage;
  metrics.coverage_mc_se = cov.mc_se;
  metrics.mc_sampling_variance = mc_variance(estimates);

  if (spec.estimator == EstimatorKind::sre && !paired_hte_estimates.empty())
    metrics.precision_gain = precision_gain(estimates, paired_hte_estimates);
  return metrics;
}

void GridConfig::validate() const {
  if (variances.empty()) throw config_error("grid: variance list is empty");
  for (double v : variances)
    if (!(v > 0.0) || !std::isfinite(v)) throw config_error("grid: variances must be > 0");
  if (sample_sizes.empty()) throw config_error("grid: sample size list is empty");
  const std::int64_t cells = static_cast<std::int64_t>(grid_rows) * grid_cols;
  int n_max = 0;
  for (int n : sample_sizes) {
    if (n < 1) throw config_error("grid: sample sizes must be >= 1");
    n_max = std::max(n_max, n);
  }
  if (cells < 50LL * n_max)
    throw config_error("grid: population must have at least 50 x max(n) cells "
                       "(the variance estimators omit the finite-population correction)");
  if (r2_values.empty()) throw config_error("grid: r2 list is empty");
  int nonzero = 0;
  for (double r2 : r2_values) {
    if (!(r2 >= 0.0 && r2 < 1.0)) throw config_error("grid: r2 values must be in [0, 1)");
    if (r2 > 0.0) ++nonzero;
  }
  if (nonzero > 1)
    throw config_error("grid: at most one nonzero r2 (one correlated covariate per population)");
  if (replicates < 1) throw config_error("grid: replicates must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw config_error("grid: alpha must be in (0, 1)");
  if (grid_rows < 8 || grid_cols < 8) throw config_error("grid: grid must be at least 8x8");
  const double half_min = std::min(grid_rows, grid_cols) / 2.0;
  if (!(range_x > 0.0) || range_x > half_min || !(range_delta > 0.0) || range_delta > half_min)
    throw config_error("grid: covariance ranges must be in (0, min(rows, cols)/2]");
  if (!std::isfinite(target_mean)) throw config_error("grid: target mean must be finite");
}

PopulationSpec GridConfig::population_spec_for(double population_variance) const {
  double r2 = 0.0;
  for (double v : r2_values) r2 = std::max(r2, v);
  return make_population_spec(grid_rows, grid_cols, population_variance, r2, target_mean,
                              range_x, range_delta,
                              population_seed(master_seed, population_variance));
}

GridResult run_grid(const GridConfig& config, const std::function<void(const std::string&)>& log) {
  config.validate();
  const std::vector<VariantPlan> plans = make_plans(config.r2_values);
  const auto say = [&log](const std::string& line) {
    if (log) log(line);
  };

  GridResult result;
  for (double variance : config.variances) {
    const PopulationSpec pspec = config.population_spec_for(variance);
    Population pop;
    try {
      pop = build_population(pspec);
    } catch (const std::exception& e) {
      for (int n : config.sample_sizes)
        for (const auto& plan : plans) {
          ScenarioSpec spec{variance, plan.r2, n, plan.kind, config.replicates,
                            config.master_seed, config.alpha};
          result.failures.push_back({spec.id(), std::string("population build failed: ") + e.what()});
        }
      continue;
    }
    {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "population var=%g built: mu=%.12g var_z=%.6f r2=%.12g", variance, pop.mu,
                    pop.var_z, pop.r2_realized);
      say(buf);
    }

    for (int n : config.sample_sizes) {
      // All estimator variants share the replicate sample draws.
      std::vector<std::vector<ReplicateRecord>> records(plans.size());
      for (auto& r : records) r.resize(config.replicates);
      std::vector<std::atomic<bool>> failed(plans.size());
      std::vector<std::string> failure_message(plans.size());
      std::mutex failure_mutex;

      try {
        parallel_for(static_cast<std::size_t>(config.replicates), config.threads,
                     [&](std::size_t m) {
                       const std::uint64_t seed = replicate_seed(config.master_seed, variance,
                                                                 n, static_cast<int>(m));
                       const Sample sample = srs_sample(pop, n, seed);
                       for (std::size_t v = 0; v < plans.size(); ++v) {
                         if (failed[v].load(std::memory_order_relaxed)) continue;
                         try {
                           records[v][m] = evaluate_replicate(plans[v], sample, pop, config.alpha);
                         } catch (const std::exception& e) {
                           const std::lock_guard<std::mutex> lock(failure_mutex);
                           if (!failed[v].exchange(true)) failure_message[v] = e.what();
                         }
                       }
                     });
      } catch (const std::exception& e) {
        // Sampling itself failed: every variant of the cell is affected.
        for (const auto& plan : plans) {
          ScenarioSpec spec{variance, plan.r2, n, plan.kind, config.replicates,
                            config.master_seed, config.alpha};
          result.failures.push_back({spec.id(), e.what()});
        }
        continue;
      }

      std::vector<double> hte_estimates;
      for (std::size_t v = 0; v < plans.size(); ++v) {
        ScenarioSpec spec{variance, plans[v].r2, n, plans[v].kind, config.replicates,
                          config.master_seed, config.alpha};
        if (failed[v].load()) {
          result.failures.push_back({spec.id(), failure_message[v]});
          continue;
        }
        try {
          const ScenarioMetrics metrics =
              summarize_scenario(spec, records[v], pop.mu,
                                 plans[v].kind == EstimatorKind::sre
                                     ? std::span<const double>(hte_estimates)
                                     : std::span<const double>());
          if (plans[v].kind == EstimatorKind::hte) hte_estimates = extract_estimates(records[v]);
          result.metrics.push_back(metrics);
        } catch (const std::exception& e) {
          result.failures.push_back({spec.id(), e.what()});
        }
      }
      {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "var=%g n=%d done (%d replicates)", variance, n,
                      config.replicates);
        say(buf);
      }
    }
  }
  return result;
}

}  // namespace mrvlab
