// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// mrvlab command line: runs the scenario grid and writes
// run_manifest.txt, bias_table.csv, bias_figure.csv, coverage.csv, gain.csv
// into the output directory.  Exit codes: 0 success, 2 usage error,
// 1 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "mrvlab/config.hpp"
#include "mrvlab/csv.hpp"
#include "mrvlab/montecarlo.hpp"
#include "mrvlab/version.hpp"

int main(int argc, char** argv) {
  using namespace mrvlab;

  RunConfig config;
  try {
    config = parse_config(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const help_requested& help) {
    std::cout << help.text;
    return 0;
  } catch (const usage_error& e) {
    std::cerr << "mrvlab: " << e.what() << "\n";
    std::cerr << "run 'mrvlab --help' for usage\n";
    return 2;
  }

  try {
    std::filesystem::create_directories(config.out_dir);
    write_manifest(config, config.out_dir + "/run_manifest.txt");

    const auto start = std::chrono::steady_clock::now();
    const GridResult result = run_grid(config.grid, [](const std::string& line) {
      std::cerr << "[mrvlab] " << line << "\n";
    });
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (!result.metrics.empty()) {
      emit_bias_table(result.metrics, config.out_dir + "/bias_table.csv");
      emit_figure_data(result.metrics, config.out_dir);
    }
    std::fprintf(stderr, "[mrvlab] %zu scenario(s) in %.1f s -> %s\n", result.metrics.size(),
                 seconds, config.out_dir.c_str());

    if (!result.failures.empty()) {
      for (const auto& failure : result.failures)
        std::cerr << "mrvlab: scenario failed: " << failure.scenario_id << ": "
                  << failure.message << "\n";
      return 1;
    }
    if (result.metrics.empty()) {
      std::cerr << "mrvlab: no scenarios produced metrics\n";
      return 1;
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "mrvlab: " << e.what() << "\n";
    return 1;
  }
}
