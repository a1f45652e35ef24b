// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// CSV emitters for the result tables and figure data.  Fixed headers,
// period decimal separator, locale-independent formatting: runs with the
// same configuration and seed produce byte-identical files.

#pragma once

#include <string>
#include <vector>

#include "mrvlab/montecarlo.hpp"

namespace mrvlab {

/// The bias t-test table.  Columns: population_variance, r2_score,
/// sample_size, estimator, empirical_bias (3 decimals), t_statistic
/// (3 decimals), p_value (4 decimals), statistically_significant
/// (TRUE/FALSE).  One data row per scenario.
void emit_bias_table(const std::vector<ScenarioMetrics>& metrics, const std::string& path);

/// Figure data keyed by (population_variance, r2_score, sample_size,
/// estimator):
///   bias_figure.csv — empirical bias with the per-scenario t-test critical
///     value t_{1-alpha/2, M-1} * s / sqrt(M);
///   coverage.csv    — empirical coverage, its MC standard error, and the
///     nominal 0.95 reference;
///   gain.csv        — precision gain per SRE series.
void emit_figure_data(const std::vector<ScenarioMetrics>& metrics,
                      const std::string& out_dir);

/// Formats one bias-table data row (exposed for the format contract tests).
std::string bias_table_row(const ScenarioMetrics& m);

/// Minimal CSV reader for round-trip checks: returns header + rows of a
/// comma-separated file without quoting (none of our fields contain commas).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::string& path);

}  // namespace mrvlab
