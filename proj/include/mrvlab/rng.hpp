// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random-number utilities.
//
// The engine is std::mt19937_64, whose output sequence is fully specified by
// the standard.  Distribution transforms are implemented here instead of
// using <random> distributions, which are implementation-defined; this keeps
// generated streams identical across standard libraries for a given seed.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace mrvlab {

/// One round of the splitmix64 generator; advances `state`.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and a list of words
/// (tags, indices, counters).  Counter-based: the result depends only on the
/// inputs, never on call order, so replicate streams are reproducible under
/// any parallel schedule.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> words) {
  std::uint64_t state = base ^ 0xD1B54A32D192ED03ull;
  std::uint64_t h = splitmix64_next(state);
  for (std::uint64_t w : words) {
    state ^= w;
    h = splitmix64_next(state);
    state ^= h;
  }
  return h;
}

/// Bit pattern of a double, for mixing real-valued identifiers into seeds.
inline std::uint64_t seed_word(double v) {
  static_assert(sizeof(double) == sizeof(std::uint64_t));
  std::uint64_t bits;
  __builtin_memcpy(&bits, &v, sizeof(bits));
  return bits;
}

/// Uniform integer in [0, bound), bound >= 1.  Unbiased via rejection.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t min = (0 - bound) % bound;  // 2^64 mod bound
  std::uint64_t r = gen();
  while (r < min) r = gen();
  return r % bound;
}

/// Uniform double in [0, 1) with 53-bit resolution.
inline double uniform_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal deviates via Box-Muller.  Caches the second deviate of
/// each pair, so draws consume uniforms in a fixed, portable pattern.
class NormalSampler {
 public:
  double operator()(std::mt19937_64& gen) {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform_unit(gen);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mrvlab
