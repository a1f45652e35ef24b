// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mrvlab/errors.hpp"
#include "mrvlab/sampling.hpp"

using namespace mrvlab;

namespace {

// Hand-built toy population; build_population is not involved.
Population toy_population(int cells) {
  Population pop;
  pop.spec.grid_rows = 1;
  pop.spec.grid_cols = cells;
  pop.z.resize(cells);
  pop.x.resize(cells);
  pop.x_uncorr.resize(cells);
  double total = 0.0;
  for (int k = 0; k < cells; ++k) {
    pop.z[k] = 3.0 + 0.5 * k;
    pop.x[k] = 2.0 * k;
    pop.x_uncorr[k] = 100.0 - k;
    total += pop.z[k];
  }
  pop.mu = total / cells;
  return pop;
}

}  // namespace

TEST_CASE("srs_sample: census, boundaries, errors") {
  const Population pop = toy_population(20);

  const Sample census = srs_sample(pop, 20, 123);
  std::set<std::int64_t> seen(census.cell_indices.begin(), census.cell_indices.end());
  CHECK(seen.size() == 20);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 19);
  double total = 0.0;
  for (double v : census.z) total += v;
  CHECK(total / 20.0 == doctest::Approx(pop.mu).epsilon(1e-14));

  const Sample one = srs_sample(pop, 1, 9);
  CHECK(one.n == 1);
  CHECK(one.cell_indices.size() == 1);
  CHECK(one.cell_indices[0] >= 0);
  CHECK(one.cell_indices[0] < 20);

  CHECK_THROWS_AS(srs_sample(pop, 0, 1), argument_error);
  CHECK_THROWS_AS(srs_sample(pop, 21, 1), argument_error);
}

TEST_CASE("srs_sample: values copied from the sampled cells") {
  const Population pop = toy_population(50);
  const Sample sample = srs_sample(pop, 17, 4242);
  for (int i = 0; i < sample.n; ++i) {
    const auto cell = sample.cell_indices[i];
    CHECK(sample.z[i] == pop.z[cell]);
    CHECK(sample.x[i] == pop.x[cell]);
    CHECK(sample.x_uncorr[i] == pop.x_uncorr[cell]);
  }
}

TEST_CASE("srs_sample: without replacement, always") {
  const Population pop = toy_population(40);
  for (int rep = 0; rep < 2000; ++rep) {
    const Sample sample = srs_sample(pop, 10, 50000 + rep);
    std::set<std::int64_t> seen(sample.cell_indices.begin(), sample.cell_indices.end());
    REQUIRE(seen.size() == 10);
    REQUIRE(*seen.begin() >= 0);
    REQUIRE(*seen.rbegin() < 40);
  }
}

TEST_CASE("srs_sample: determinism") {
  const Population pop = toy_population(30);
  const Sample a = srs_sample(pop, 12, 777);
  const Sample b = srs_sample(pop, 12, 777);
  CHECK(a.cell_indices == b.cell_indices);
  CHECK(a.z == b.z);
  const Sample c = srs_sample(pop, 12, 778);
  CHECK(a.cell_indices != c.cell_indices);
}

TEST_CASE("srs_sample: uniform first-order inclusion probabilities") {
  // 10^5 draws of n = 2 from 20 cells: every cell's inclusion frequency
  // must sit within 3 binomial standard errors of n/N = 0.1 (and within
  // the coarser 0.1 +/- 0.005 check).
  const Population pop = toy_population(20);
  const int draws = 100000;
  std::vector<int> hits(20, 0);
  for (int rep = 0; rep < draws; ++rep) {
    const Sample sample = srs_sample(pop, 2, 910000 + rep);
    for (const auto cell : sample.cell_indices) ++hits[cell];
  }
  const double p = 2.0 / 20.0;
  const double se = std::sqrt(p * (1.0 - p) / draws);
  for (int cell = 0; cell < 20; ++cell) {
    const double freq = static_cast<double>(hits[cell]) / draws;
    CHECK(std::fabs(freq - p) <= 3.0 * se);
    CHECK(std::fabs(freq - p) <= 0.005);
  }
}
