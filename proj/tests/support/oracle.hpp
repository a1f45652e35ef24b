// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles, deliberately independent of the library code paths:
// literal loop translations of the estimator formulas, exhaustive subset
// enumeration, and a quadrature-based Student-t CDF.  Used to freeze
// expected values and to cross-check the production implementations.

#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

// ---- literal estimator formulas (plain accumulation loops) ----

inline double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double t : v) s += t;
  return s / static_cast<double>(v.size());
}

inline double hte_point(const std::vector<double>& z) { return mean_of(z); }

// S^2(z)/n with the n-1 divisor.
inline double hte_variance(const std::vector<double>& z) {
  const double zbar = mean_of(z);
  double ss = 0.0;
  for (double v : z) ss += (v - zbar) * (v - zbar);
  const auto n = static_cast<double>(z.size());
  return ss / (n - 1.0) / n;
}

struct OlsFit {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> e;
};

inline OlsFit ols(const std::vector<double>& x, const std::vector<double>& z) {
  const double xbar = mean_of(x);
  const double zbar = mean_of(z);
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    num += (x[k] - xbar) * (z[k] - zbar);
    den += (x[k] - xbar) * (x[k] - xbar);
  }
  OlsFit fit;
  fit.b = num / den;
  fit.a = zbar - fit.b * xbar;
  fit.e.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) fit.e[k] = z[k] - (fit.a + fit.b * x[k]);
  return fit;
}

inline double sre_point(const std::vector<double>& x, const std::vector<double>& z,
                        double xbar_pop) {
  const OlsFit fit = ols(x, z);
  return mean_of(z) + fit.b * (xbar_pop - mean_of(x));
}

// The verbose decomposition: model prediction at xbar_pop plus the mean
// residual correction.
inline double sre_point_decomposed(const std::vector<double>& x, const std::vector<double>& z,
                                   double xbar_pop) {
  const OlsFit fit = ols(x, z);
  return fit.a + fit.b * xbar_pop + mean_of(fit.e);
}

// S^2(e)/n with the n-2 divisor.
inline double sre_variance_naive(const std::vector<double>& x, const std::vector<double>& z) {
  const OlsFit fit = ols(x, z);
  const double ebar = mean_of(fit.e);
  double ss = 0.0;
  for (double v : fit.e) ss += (v - ebar) * (v - ebar);
  const auto n = static_cast<double>(x.size());
  return ss / (n - 2.0) / n;
}

inline double sre_variance_gweight(const std::vector<double>& x, const std::vector<double>& z,
                                   double xbar_pop) {
  const OlsFit fit = ols(x, z);
  const auto n = static_cast<double>(x.size());
  const double xbar_s = mean_of(x);
  double s2x = 0.0;
  for (double v : x) s2x += (v - xbar_s) * (v - xbar_s);
  s2x /= n;
  std::vector<double> ge(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double g = 1.0 + (xbar_pop - xbar_s) * (x[k] - xbar_s) / s2x;
    ge[k] = g * fit.e[k];
  }
  const double gebar = mean_of(ge);
  double ss = 0.0;
  for (double v : ge) ss += (v - gebar) * (v - gebar);
  return ss / (n * (n - 1.0));
}

// ---- exhaustive enumeration of all C(N, n) samples ----

inline void for_each_subset(int population_size, int sample_size,
                            const std::function<void(const std::vector<int>&)>& visit) {
  assert(sample_size >= 1 && sample_size <= population_size);
  std::vector<int> idx(sample_size);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    visit(idx);
    int i = sample_size - 1;
    while (i >= 0 && idx[i] == population_size - sample_size + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < sample_size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::vector<double> gather(const std::vector<double>& values,
                                  const std::vector<int>& idx) {
  std::vector<double> out(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out[k] = values[idx[k]];
  return out;
}

// ---- quadrature Student-t CDF (Simpson's rule on the density) ----

inline double t_pdf(double t, double df) {
  const double c = std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
                   0.5 * std::log(df * std::acos(-1.0));
  return std::exp(c - ((df + 1.0) / 2.0) * std::log1p(t * t / df));
}

inline double t_cdf_quadrature(double t, double df) {
  const double upper = std::fabs(t);
  const int steps = 20000;  // even
  const double h = upper / steps;
  double sum = t_pdf(0.0, df) + t_pdf(upper, df);
  for (int i = 1; i < steps; ++i) sum += t_pdf(i * h, df) * ((i % 2 == 1) ? 4.0 : 2.0);
  const double half = sum * h / 3.0;  // integral over [0, |t|]
  return t >= 0.0 ? 0.5 + half : 0.5 - half;
}

}  // namespace oracle
