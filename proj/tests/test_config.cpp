// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "mrvlab/config.hpp"
#include "mrvlab/version.hpp"

using namespace mrvlab;

namespace {

std::string write_temp_config(const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / "mrvlab_test_config.txt";
  std::ofstream out(path);
  out << contents;
  out.close();
  return path.string();
}

struct EnvGuard {
  explicit EnvGuard(const char* name) : name_(name) { unsetenv(name); }
  ~EnvGuard() { unsetenv(name_); }
  const char* name_;
};

}  // namespace

TEST_CASE("parse_config: documented defaults give the full desk grid") {
  const EnvGuard guard("MRV_LAB_SEED");
  const RunConfig rc = parse_config({});
  CHECK(rc.grid.variances == std::vector<double>{100, 500, 900, 1300, 1700, 2100});
  CHECK(rc.grid.sample_sizes ==
        std::vector<int>{5, 10, 20, 40, 80, 160, 320, 640, 1280, 2560, 5120});
  CHECK(rc.grid.r2_values == std::vector<double>{0.0, 0.3});
  CHECK(rc.grid.replicates == 2000);
  CHECK(rc.grid.master_seed == kDefaultMasterSeed);
  CHECK(rc.grid.grid_rows == 512);
  CHECK(rc.grid.grid_cols == 512);
  CHECK(rc.grid.range_x == 40.0);
  CHECK(rc.grid.range_delta == 15.0);
  CHECK(rc.out_dir == "out");
  CHECK_FALSE(rc.full);
}

TEST_CASE("parse_config: flags override defaults") {
  const EnvGuard guard("MRV_LAB_SEED");
  const RunConfig rc = parse_config({"--variances", "2100", "--n", "1280", "--M", "10000",
                                     "--seed", "42", "--out", "results", "--threads", "3"});
  CHECK(rc.grid.variances == std::vector<double>{2100});
  CHECK(rc.grid.sample_sizes == std::vector<int>{1280});
  CHECK(rc.grid.replicates == 10000);
  CHECK(rc.grid.master_seed == 42);
  CHECK(rc.grid.threads == 3);
  CHECK(rc.out_dir == "results");
}

TEST_CASE("parse_config: usage errors") {
  const EnvGuard guard("MRV_LAB_SEED");
  CHECK_THROWS_AS(parse_config({"--M", "0"}), usage_error);
  CHECK_THROWS_AS(parse_config({"--badflag"}), usage_error);
  CHECK_THROWS_AS(parse_config({"--r2", "0.2", "0.3"}), usage_error);
  CHECK_THROWS_AS(parse_config({"--full", "--M", "500"}), usage_error);
  CHECK_THROWS_AS(parse_config({"--n", "9999999"}), usage_error);  // N < 50 n
  CHECK_THROWS_AS(parse_config({"--grid-rows", "4"}), usage_error);
  CHECK_THROWS_AS(parse_config({"--range-x", "400"}), usage_error);
  CHECK_THROWS_AS(parse_config({"--M", "abc"}), usage_error);
}

TEST_CASE("parse_config: --full sets the paper-scale replicate count") {
  const EnvGuard guard("MRV_LAB_SEED");
  CHECK(parse_config({"--full"}).grid.replicates == 10000);
  CHECK(parse_config({"--full"}).full);
  // --M 10000 is not a conflict (same value).
  CHECK(parse_config({"--full", "--M", "10000"}).grid.replicates == 10000);
}

TEST_CASE("parse_config: config file with comments; flags take precedence") {
  const EnvGuard guard("MRV_LAB_SEED");
  const std::string path = write_temp_config(
      "# run setup\n"
      "variances = 900, 500\n"
      "n = 10, 20   # two sizes\n"
      "M = 64\n"
      "seed = 7\n"
      "grid-rows = 128\n"
      "grid-cols = 128\n"
      "range-x = 12\n"
      "range-delta = 6\n"
      "out = from_file\n");

  const RunConfig from_file = parse_config({"--config", path});
  CHECK(from_file.grid.variances == std::vector<double>{900, 500});
  CHECK(from_file.grid.sample_sizes == std::vector<int>{10, 20});
  CHECK(from_file.grid.replicates == 64);
  CHECK(from_file.grid.master_seed == 7);
  CHECK(from_file.grid.grid_rows == 128);
  CHECK(from_file.out_dir == "from_file");

  const RunConfig overridden = parse_config({"--config", path, "--M", "128", "--out", "flagged"});
  CHECK(overridden.grid.replicates == 128);
  CHECK(overridden.out_dir == "flagged");
  CHECK(overridden.grid.master_seed == 7);  // file still applies where no flag

  CHECK_THROWS_AS(parse_config({"--config", write_temp_config("bogus_key = 1\n")}),
                  usage_error);
  CHECK_THROWS_AS(parse_config({"--config", write_temp_config("M 64\n")}), usage_error);
  CHECK_THROWS_AS(parse_config({"--config", write_temp_config("M = x64\n")}), usage_error);
  CHECK_THROWS_AS(parse_config({"--config", "/nonexistent/config"}), usage_error);
}

TEST_CASE("parse_config: MRV_LAB_SEED is the master-seed fallback") {
  const EnvGuard guard("MRV_LAB_SEED");
  setenv("MRV_LAB_SEED", "991", 1);
  CHECK(parse_config({}).grid.master_seed == 991);
  // Flag wins over the environment.
  CHECK(parse_config({"--seed", "5"}).grid.master_seed == 5);
  // File wins over the environment.
  const std::string path = write_temp_config("seed = 17\n");
  CHECK(parse_config({"--config", path}).grid.master_seed == 17);
}

TEST_CASE("parse_config: --help carries the usage text") {
  try {
    parse_config({"--help"});
    FAIL("expected help_requested");
  } catch (const help_requested& help) {
    CHECK(help.text.find("--variances") != std::string::npos);
    CHECK(help.text.find("--full") != std::string::npos);
  }
}

TEST_CASE("write_manifest: version and config echo") {
  const EnvGuard guard("MRV_LAB_SEED");
  const RunConfig rc = parse_config({"--seed", "31415"});
  const auto path = std::filesystem::temp_directory_path() / "mrvlab_manifest.txt";
  write_manifest(rc, path.string());

  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.find(std::string("version = ") + kVersionString) != std::string::npos);
  CHECK(text.find("master_seed = 31415") != std::string::npos);
  CHECK(text.find("variances = 100,500,900,1300,1700,2100") != std::string::npos);
  std::filesystem::remove(path);
}
