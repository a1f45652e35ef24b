// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "mrvlab/geofield.hpp"

namespace mrvlab {

/// One simple random sample of grid cells, with the population values
/// copied at the sampled locations.
struct Sample {
  int n = 0;
  std::vector<std::int64_t> cell_indices;  // distinct, within grid bounds
  std::vector<double> z;
  std::vector<double> x;
  std::vector<double> x_uncorr;
};

/// Draws n distinct cells uniformly without replacement (partial
/// Fisher-Yates with a sparse displacement map, O(n) extra space).
/// Deterministic given the seed.  Throws argument_error unless
/// 1 <= n <= population size.
Sample srs_sample(const Population& pop, int n, std::uint64_t seed);

}  // namespace mrvlab
