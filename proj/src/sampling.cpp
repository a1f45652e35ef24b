// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mrvlab/sampling.hpp"

#include <random>
#include <unordered_map>

#include "mrvlab/errors.hpp"
#include "mrvlab/rng.hpp"

namespace mrvlab {

Sample srs_sample(const Population& pop, int n, std::uint64_t seed) {
  const std::int64_t population_size = pop.size();
  if (n < 1 || n > population_size)
    throw argument_error("srs_sample: n must be in [1, population size]");

  std::mt19937_64 gen(seed);

  // Partial Fisher-Yates over the virtual index array 0..N-1.  Only the
  // displaced entries are stored, so extra space is O(n).
  std::unordered_map<std::int64_t, std::int64_t> displaced;
  displaced.reserve(2 * static_cast<std::size_t>(n));

  Sample sample;
  sample.n = n;
  sample.cell_indices.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::int64_t j =
        i + static_cast<std::int64_t>(
                uniform_below(gen, static_cast<std::uint64_t>(population_size - i)));
    const auto it_j = displaced.find(j);
    const std::int64_t value_at_j = it_j == displaced.end() ? j : it_j->second;
    const auto it_i = displaced.find(i);
    const std::int64_t value_at_i = it_i == displaced.end() ? i : it_i->second;
    // swap(a[i], a[j]) on the virtual array, then take a[i].  Slot i is
    // never read again (future draws are >= i+1), so only slot j needs its
    // displaced value recorded.
    sample.cell_indices[i] = value_at_j;
    displaced[j] = value_at_i;
  }

  sample.z.resize(n);
  sample.x.resize(n);
  sample.x_uncorr.resize(n);
  for (int i = 0; i < n; ++i) {
    const std::int64_t cell = sample.cell_indices[i];
    sample.z[i] = pop.z[cell];
    sample.x[i] = pop.x[cell];
    sample.x_uncorr[i] = pop.x_uncorr[cell];
  }
  return sample;
}

}  // namespace mrvlab
