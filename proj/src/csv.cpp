// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mrvlab/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mrvlab/errors.hpp"

namespace mrvlab {

namespace {

std::string compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string precise(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw io_error("write failed for " + path);
}

std::string key_columns(const ScenarioMetrics& m) {
  return compact(m.population_variance) + "," + compact(m.r2) + "," +
         std::to_string(m.sample_size) + "," + to_string(m.estimator);
}

}  // namespace

std::string bias_table_row(const ScenarioMetrics& m) {
  return key_columns(m) + "," + fixed(m.empirical_bias, 3) + "," + fixed(m.t_statistic, 3) +
         "," + fixed(m.p_value, 4) + "," + (m.significant ? "TRUE" : "FALSE");
}

void emit_bias_table(const std::vector<ScenarioMetrics>& metrics, const std::string& path) {
  if (metrics.empty()) throw argument_error("emit_bias_table: no metrics");
  std::ofstream out = open_for_write(path);
  out << "population_variance,r2_score,sample_size,estimator,empirical_bias,t_statistic,"
         "p_value,statistically_significant\n";
  for (const auto& m : metrics) out << bias_table_row(m) << "\n";
  finish(out, path);
}

void emit_figure_data(const std::vector<ScenarioMetrics>& metrics, const std::string& out_dir) {
  if (metrics.empty()) throw argument_error("emit_figure_data: no metrics");

  const std::string bias_path = out_dir + "/bias_figure.csv";
  std::ofstream bias = open_for_write(bias_path);
  bias << "population_variance,r2_score,sample_size,estimator,empirical_bias,critical_value\n";
  for (const auto& m : metrics) {
    // Zero-bias t-test band at the 5% level: +/- t_{0.975, M-1} * s / sqrt(M).
    const double se = std::sqrt(m.mc_sampling_variance / m.replicates);
    const double critical = t_quantile(0.975, m.replicates - 1) * se;
    bias << key_columns(m) << "," << precise(m.empirical_bias) << "," << precise(critical)
         << "\n";
  }
  finish(bias, bias_path);

  const std::string coverage_path = out_dir + "/coverage.csv";
  std::ofstream coverage = open_for_write(coverage_path);
  coverage << "population_variance,r2_score,sample_size,estimator,coverage,coverage_mc_se,"
              "nominal_coverage\n";
  for (const auto& m : metrics)
    coverage << key_columns(m) << "," << precise(m.coverage) << "," << precise(m.coverage_mc_se)
             << ",0.95\n";
  finish(coverage, coverage_path);

  const std::string gain_path = out_dir + "/gain.csv";
  std::ofstream gain = open_for_write(gain_path);
  gain << "population_variance,r2_score,sample_size,estimator,precision_gain\n";
  for (const auto& m : metrics)
    if (m.precision_gain)
      gain << key_columns(m) << "," << precise(*m.precision_gain) << "\n";
  finish(gain, gain_path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  return table;
}

}  // namespace mrvlab
