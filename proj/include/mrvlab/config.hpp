// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "mrvlab/errors.hpp"
#include "mrvlab/montecarlo.hpp"

namespace mrvlab {

/// Invalid command line or config file; the CLI exits with code 2.
struct usage_error : error {
  using error::error;
};

/// Thrown by parse_config when --help is requested; carries the help text.
struct help_requested {
  std::string text;
};

/// Fully resolved run configuration.
struct RunConfig {
  GridConfig grid;
  std::string out_dir = "out";
  bool full = false;  // paper scale: M = 10000
};

/// Parses flags and the optional `--config` key=value file (one `key = value`
/// per line, `#` comments, comma-separated lists; flags override the file).
/// The master seed falls back to the MRV_LAB_SEED environment variable when
/// neither flag nor file sets it.  Throws usage_error on unknown keys,
/// malformed values, or conflicting flags.
RunConfig parse_config(const std::vector<std::string>& args);

/// Writes the provenance manifest: version string plus the resolved
/// configuration, one key = value per line.
void write_manifest(const RunConfig& config, const std::string& path);

}  // namespace mrvlab
