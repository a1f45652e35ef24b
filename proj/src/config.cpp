// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mrvlab/config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "mrvlab/version.hpp"

namespace mrvlab {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

template <class T>
T parse_number(const std::string& key, const std::string& text);

template <>
double parse_number<double>(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw usage_error("malformed value for '" + key + "': " + text);
  }
  if (used != text.size()) throw usage_error("malformed value for '" + key + "': " + text);
  return v;
}

template <>
long long parse_number<long long>(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw usage_error("malformed value for '" + key + "': " + text);
  }
  if (used != text.size()) throw usage_error("malformed value for '" + key + "': " + text);
  return v;
}

std::uint64_t parse_seed(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw usage_error("malformed value for '" + key + "': " + text);
  }
  if (used != text.size()) throw usage_error("malformed value for '" + key + "': " + text);
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw usage_error("malformed value for '" + key + "': " + text);
}

// Flat `key = value` file with '#' comments and comma-separated lists.
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot read config file: " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw usage_error("config file line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw usage_error("config file line " + std::to_string(lineno) + ": empty key");
    entries[key] = value;
  }
  return entries;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig rc;

  CLI::App app{"mrvlab: Monte Carlo laboratory for design-based (HTE) and model-assisted "
               "(SRE) estimation of spatial population means"};
  app.set_help_flag("-h,--help", "print this help and exit");

  std::vector<double> variances, r2_values;
  std::vector<int> sample_sizes;
  long long replicates = 0;
  std::uint64_t seed = 0;
  std::string out_dir, config_path;
  int grid_rows = 0, grid_cols = 0, threads = 0;
  double range_x = 0.0, range_delta = 0.0;
  bool full = false;

  app.add_option("--variances", variances, "population variance levels (tC^2/ha^2)");
  app.add_option("--n", sample_sizes, "sample sizes");
  app.add_option("--r2", r2_values, "SRE covariate choices: 0 (uncorrelated) and/or one value in (0,1)");
  app.add_option("--M", replicates, "Monte Carlo replicates per scenario");
  app.add_option("--seed", seed, "master seed (fallback: MRV_LAB_SEED, then the built-in default)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--grid-rows", grid_rows, "population grid rows");
  app.add_option("--grid-cols", grid_cols, "population grid columns");
  app.add_option("--range-x", range_x, "autocorrelation range of x, in cells");
  app.add_option("--range-delta", range_delta, "autocorrelation range of delta, in cells");
  app.add_option("--threads", threads, "worker threads (0 = hardware)");
  app.add_flag("--full", full, "paper scale: M = 10000");
  app.add_option("--config", config_path, "key = value config file (flags take precedence)");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    throw help_requested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw usage_error(e.what());
  }

  bool m_set = app.count("--M") > 0;
  bool seed_set = app.count("--seed") > 0;

  if (!config_path.empty()) {
    const auto entries = read_config_file(config_path);
    for (const auto& [key, value] : entries) {
      // Flags override the file: apply a file entry only when the
      // corresponding flag was not given on the command line.
      if (key == "variances") {
        if (app.count("--variances") == 0) {
          variances.clear();
          for (const auto& item : split_list(value))
            variances.push_back(parse_number<double>(key, item));
        }
      } else if (key == "n") {
        if (app.count("--n") == 0) {
          sample_sizes.clear();
          for (const auto& item : split_list(value))
            sample_sizes.push_back(static_cast<int>(parse_number<long long>(key, item)));
        }
      } else if (key == "r2") {
        if (app.count("--r2") == 0) {
          r2_values.clear();
          for (const auto& item : split_list(value))
            r2_values.push_back(parse_number<double>(key, item));
        }
      } else if (key == "M") {
        if (!m_set) {
          replicates = parse_number<long long>(key, value);
          m_set = true;
        }
      } else if (key == "seed") {
        if (!seed_set) {
          seed = parse_seed(key, value);
          seed_set = true;
        }
      } else if (key == "out") {
        if (app.count("--out") == 0) out_dir = value;
      } else if (key == "grid-rows") {
        if (app.count("--grid-rows") == 0)
          grid_rows = static_cast<int>(parse_number<long long>(key, value));
      } else if (key == "grid-cols") {
        if (app.count("--grid-cols") == 0)
          grid_cols = static_cast<int>(parse_number<long long>(key, value));
      } else if (key == "range-x") {
        if (app.count("--range-x") == 0) range_x = parse_number<double>(key, value);
      } else if (key == "range-delta") {
        if (app.count("--range-delta") == 0) range_delta = parse_number<double>(key, value);
      } else if (key == "threads") {
        if (app.count("--threads") == 0)
          threads = static_cast<int>(parse_number<long long>(key, value));
      } else if (key == "full") {
        if (app.count("--full") == 0) full = parse_bool(key, value);
      } else {
        throw usage_error("unknown config key: " + key);
      }
    }
  }

  // Apply everything that was set; defaults stay from GridConfig/RunConfig.
  if (app.count("--variances") > 0 || !variances.empty()) {
    if (!variances.empty()) rc.grid.variances = variances;
    else throw usage_error("variances list is empty");
  }
  if (app.count("--n") > 0 || !sample_sizes.empty()) {
    if (!sample_sizes.empty()) rc.grid.sample_sizes = sample_sizes;
    else throw usage_error("sample size list is empty");
  }
  if (app.count("--r2") > 0 || !r2_values.empty()) {
    if (!r2_values.empty()) rc.grid.r2_values = r2_values;
    else throw usage_error("r2 list is empty");
  }
  if (app.count("--out") > 0 || !out_dir.empty()) rc.out_dir = out_dir;
  if (grid_rows != 0) rc.grid.grid_rows = grid_rows;
  if (grid_cols != 0) rc.grid.grid_cols = grid_cols;
  if (range_x != 0.0) rc.grid.range_x = range_x;
  if (range_delta != 0.0) rc.grid.range_delta = range_delta;
  if (threads != 0) rc.grid.threads = threads;
  rc.full = full;

  if (full && m_set && replicates != 10000)
    throw usage_error("--full conflicts with --M (pick one)");
  if (m_set) {
    if (replicates < 1) throw usage_error("M must be >= 1");
    rc.grid.replicates = static_cast<int>(replicates);
  }
  if (full) rc.grid.replicates = 10000;

  if (seed_set) {
    rc.grid.master_seed = seed;
  } else if (const char* env = std::getenv("MRV_LAB_SEED")) {
    rc.grid.master_seed = parse_seed("MRV_LAB_SEED", env);
  } else {
    rc.grid.master_seed = kDefaultMasterSeed;
  }

  // Full validation now, so errors surface as usage errors (exit code 2)
  // instead of runtime failures.
  try {
    rc.grid.validate();
  } catch (const config_error& e) {
    throw usage_error(e.what());
  }
  return rc;
}

void write_manifest(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write manifest: " + path);
  const auto list_ll = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
  };
  const auto list_d = [](const std::vector<double>& v) {
    std::string s;
    char buf[48];
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%g", v[i]);
      s += (i ? "," : "") + std::string(buf);
    }
    return s;
  };
  out << "version = " << kVersionString << "\n";
  out << "master_seed = " << config.grid.master_seed << "\n";
  out << "replicates = " << config.grid.replicates << "\n";
  out << "variances = " << list_d(config.grid.variances) << "\n";
  out << "n = " << list_ll(config.grid.sample_sizes) << "\n";
  out << "r2 = " << list_d(config.grid.r2_values) << "\n";
  out << "grid-rows = " << config.grid.grid_rows << "\n";
  out << "grid-cols = " << config.grid.grid_cols << "\n";
  out << "range-x = " << config.grid.range_x << "\n";
  out << "range-delta = " << config.grid.range_delta << "\n";
  out << "target_mean = " << config.grid.target_mean << "\n";
  out << "alpha = " << config.grid.alpha << "\n";
  out << "threads = " << config.grid.threads << "\n";
  out << "full = " << (config.full ? "true" : "false") << "\n";
  out << "out = " << config.out_dir << "\n";
  out.flush();
  if (!out) throw io_error("manifest write failed: " + path);
}

}  // namespace mrvlab
