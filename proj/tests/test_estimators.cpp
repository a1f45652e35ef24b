// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "mrvlab/errors.hpp"
#include "mrvlab/estimators.hpp"
#include "support/oracle.hpp"

using namespace mrvlab;

namespace {

std::vector<double> random_vector(std::mt19937& gen, int n, double mu, double sd) {
  std::normal_distribution<double> dist(mu, sd);
  std::vector<double> v(n);
  for (auto& t : v) t = dist(gen);
  return v;
}

}  // namespace

TEST_CASE("hte: frozen examples") {
  const Estimate a = hte(std::vector<double>{1, 2, 3});
  CHECK(a.point == doctest::Approx(2.0));
  CHECK(a.variance == doctest::Approx(1.0 / 3.0));
  CHECK(a.df == 2);
  CHECK(a.method == EstimatorKind::hte);

  const Estimate b = hte(std::vector<double>{5, 5, 5, 5});
  CHECK(b.point == doctest::Approx(5.0));
  CHECK(b.variance == 0.0);

  const Estimate c = hte(std::vector<double>{0, 10});
  CHECK(c.point == doctest::Approx(5.0));
  CHECK(c.variance == doctest::Approx(25.0));
}

TEST_CASE("hte: rejects n < 2") {
  CHECK_THROWS_AS(hte(std::vector<double>{1.0}), insufficient_sample_error);
  CHECK_THROWS_AS(hte(std::vector<double>{}), insufficient_sample_error);
}

TEST_CASE("ols_fit: perfect line has zero residuals") {
  const std::vector<double> x = {0, 1, 2};
  const std::vector<double> z = {1, 3, 5};  // z = 2x + 1
  const RegressionFit fit = ols_fit(x, z);
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.slope == doctest::Approx(2.0));
  for (double e : fit.residuals) CHECK(std::fabs(e) < 1e-14);
}

TEST_CASE("ols_fit: frozen hand computation") {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> z = {1, 2, 2, 3};
  const RegressionFit fit = ols_fit(x, z);
  CHECK(fit.slope == doctest::Approx(0.6));
  CHECK(fit.intercept == doctest::Approx(1.1));
  // OLS with intercept: residuals sum to zero and are orthogonal to x.
  double sum = 0.0, dot = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sum += fit.residuals[k];
    dot += fit.residuals[k] * x[k];
  }
  CHECK(std::fabs(sum) < 1e-12);
  CHECK(std::fabs(dot) < 1e-12);
}

TEST_CASE("ols_fit: degenerate covariate and short input") {
  CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
                  degenerate_covariate_error);
  CHECK_THROWS_AS(ols_fit(std::vector<double>{1, 2}, std::vector<double>{1, 2}),
                  insufficient_sample_error);
}

TEST_CASE("sre: correction term vanishes at the sample covariate mean") {
  const std::vector<double> x = {2, 4, 9, 1};
  const std::vector<double> z = {3, 1, 7, 2};
  const double xbar_s = (2 + 4 + 9 + 1) / 4.0;
  const Estimate est = sre(x, z, xbar_s);
  const Estimate base = hte(z);
  CHECK(est.point == base.point);
  CHECK(est.df == 2);
}

TEST_CASE("sre: perfect model predicts the population mean exactly") {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> z = {1, 3, 5, 7};  // z = 2x + 1
  const Estimate est = sre(x, z, 10.0);
  CHECK(est.point == doctest::Approx(21.0));
  CHECK(est.variance == 0.0);
}

TEST_CASE("sre: frozen hand computation") {
  const std::vector<double> x = {0, 1, 2, 3};
  const std::vector<double> z = {1, 2, 2, 3};
  const Estimate est = sre(x, z, 2.0);
  CHECK(est.point == doctest::Approx(2.3));
}

TEST_CASE("sre_variance_naive: frozen examples") {
  RegressionFit zero;
  zero.residuals = {0, 0, 0, 0};
  CHECK(sre_variance_naive(zero, 4) == 0.0);

  RegressionFit fit;
  fit.residuals = {-1, 0, 1};
  CHECK(sre_variance_naive(fit, 3) == doctest::Approx(2.0 / 3.0));

  CHECK_THROWS_AS(sre_variance_naive(fit, 2), insufficient_sample_error);
}

TEST_CASE("sre_variance_gweight: collapses to the mean-centered form at xbar_pop = xbar_S") {
  const std::vector<double> x = {1, 2, 3, 4, 7};
  const std::vector<double> z = {2, 2, 5, 4, 9};
  const RegressionFit fit = ols_fit(x, z);
  const double xbar_s = fit.xbar_sample;
  const double got = sre_variance_gweight(x, fit, xbar_s);
  double ebar = 0.0;
  for (double e : fit.residuals) ebar += e;
  ebar /= 5.0;
  double ss = 0.0;
  for (double e : fit.residuals) ss += (e - ebar) * (e - ebar);
  CHECK(got == doctest::Approx(ss / (5.0 * 4.0)));

  RegressionFit zero = fit;
  zero.residuals.assign(5, 0.0);
  CHECK(sre_variance_gweight(x, zero, 100.0) == 0.0);
}

TEST_CASE("estimators match the literal-formula oracle on random inputs") {
  std::mt19937 gen(321);
  std::uniform_int_distribution<int> size(3, 60);
  for (int iter = 0; iter < 300; ++iter) {
    const int n = size(gen);
    const std::vector<double> x = random_vector(gen, n, 5.0, 3.0);
    std::vector<double> z = random_vector(gen, n, 1.0, 2.0);
    for (int k = 0; k < n; ++k) z[k] += 0.7 * x[k];
    const double xbar_pop = 5.0 + random_vector(gen, 1, 0.0, 1.0)[0];

    const double scale = 1.0 + std::fabs(oracle::hte_point(z));
    CHECK(std::fabs(hte(z).point - oracle::hte_point(z)) <= 1e-12 * scale);
    CHECK(std::fabs(hte(z).variance - oracle::hte_variance(z)) <= 1e-12 * scale);

    const RegressionFit fit = ols_fit(x, z);
    const oracle::OlsFit ref = oracle::ols(x, z);
    CHECK(std::fabs(fit.slope - ref.b) <= 1e-10 * (1.0 + std::fabs(ref.b)));
    CHECK(std::fabs(fit.intercept - ref.a) <= 1e-10 * (1.0 + std::fabs(ref.a)));

    const Estimate est = sre(x, z, xbar_pop);
    CHECK(std::fabs(est.point - oracle::sre_point(x, z, xbar_pop)) <= 1e-10 * scale);
    // Decomposition identity: the adjusted-mean form and the
    // prediction-plus-residual-correction form agree.
    CHECK(std::fabs(oracle::sre_point(x, z, xbar_pop) -
                    oracle::sre_point_decomposed(x, z, xbar_pop)) <= 1e-9 * scale);

    CHECK(std::fabs(sre_variance_naive(fit, n) - oracle::sre_variance_naive(x, z)) <=
          1e-12 * (1.0 + oracle::sre_variance_naive(x, z)));
    const double gw = sre_variance_gweight(x, fit, xbar_pop);
    CHECK(gw >= 0.0);
    CHECK(std::fabs(gw - oracle::sre_variance_gweight(x, z, xbar_pop)) <=
          1e-12 * (1.0 + gw));
  }
}

TEST_CASE("sre: affine covariate invariance") {
  std::mt19937 gen(99);
  for (int iter = 0; iter < 100; ++iter) {
    const int n = 5 + static_cast<int>(gen() % 40);
    const std::vector<double> x = random_vector(gen, n, 2.0, 1.5);
    std::vector<double> z = random_vector(gen, n, 0.0, 1.0);
    for (int k = 0; k < n; ++k) z[k] += 0.4 * x[k];
    const double xbar_pop = 2.1;
    const double c = 3.25, d = -7.5;
    std::vector<double> xt(n);
    for (int k = 0; k < n; ++k) xt[k] = c * x[k] + d;

    const double p0 = sre(x, z, xbar_pop).point;
    const double p1 = sre(xt, z, c * xbar_pop + d).point;
    CHECK(std::fabs(p0 - p1) <= 1e-10 * (1.0 + std::fabs(p0)));
  }
}

TEST_CASE("hte is exactly design-unbiased under full enumeration") {
  const std::vector<double> z = {3.2, 1.1, 4.8, 2.0, 5.5, 0.7, 3.9, 2.6, 4.1, 1.8, 5.0, 2.9};
  const double mu = oracle::mean_of(z);
  for (int n : {2, 3, 4}) {
    double total = 0.0;
    long count = 0;
    oracle::for_each_subset(12, n, [&](const std::vector<int>& idx) {
      total += hte(oracle::gather(z, idx)).point;
      ++count;
    });
    CHECK(std::fabs(total / static_cast<double>(count) - mu) < 1e-12);
  }
}

TEST_CASE("sre enumeration bias shrinks with n on a toy population") {
  // Fixed 12-cell toy population with a linear-plus-noise relation.
  const std::vector<double> x = {0.5, 1.1, 1.9, 2.7, 3.1, 3.8, 4.2, 5.0, 5.5, 6.3, 6.9, 7.4};
  const std::vector<double> z = {2.9, 2.2, 4.6, 3.4, 5.8, 4.1, 6.6, 5.3, 7.9, 6.1, 8.8, 7.2};
  const double mu = oracle::mean_of(z);
  const double xbar_pop = oracle::mean_of(x);

  std::vector<double> abs_bias;
  for (int n : {3, 4, 5}) {
    double total = 0.0;
    long count = 0;
    oracle::for_each_subset(12, n, [&](const std::vector<int>& idx) {
      total += sre(oracle::gather(x, idx), oracle::gather(z, idx), xbar_pop).point;
      ++count;
    });
    abs_bias.push_back(std::fabs(total / static_cast<double>(count) - mu));
  }
  CHECK(abs_bias[0] > 0.0);
  CHECK(abs_bias[0] > abs_bias[1]);
  CHECK(abs_bias[1] > abs_bias[2]);
}

TEST_CASE("t_quantile: symmetry, center, frozen table values") {
  for (int df : {1, 2, 5, 30}) CHECK(t_quantile(0.5, df) == 0.0);
  CHECK(std::fabs(t_quantile(0.975, 2) - 4.303) <= 1e-3);
  CHECK(std::fabs(t_quantile(0.975, 39) - 2.023) <= 1e-3);
  CHECK(std::fabs(t_quantile(0.975, 4) - 2.776) <= 1e-3);

  std::mt19937 gen(7);
  std::uniform_real_distribution<double> unif(0.001, 0.999);
  for (int iter = 0; iter < 200; ++iter) {
    const int df = 1 + static_cast<int>(gen() % 200);
    const double p = unif(gen);
    CHECK(std::fabs(t_quantile(p, df) + t_quantile(1.0 - p, df)) < 1e-9);
  }
  // Monotone in p.
  for (int df : {1, 3, 17}) {
    double prev = -1e300;
    for (double p = 0.02; p < 0.999; p += 0.02) {
      const double q = t_quantile(p, df);
      CHECK(q > prev);
      prev = q;
    }
  }
}

TEST_CASE("t_quantile agrees with the quadrature CDF oracle") {
  const struct {
    double p;
    int df;
  } cases[] = {{0.9, 1},   {0.975, 2}, {0.95, 5},   {0.99, 10},
               {0.975, 39}, {0.6, 3},   {0.9999, 7}, {0.75, 120}};
  for (const auto& c : cases) {
    const double q = t_quantile(c.p, c.df);
    CHECK(std::fabs(oracle::t_cdf_quadrature(q, c.df) - c.p) < 1e-6);
  }
}

TEST_CASE("t_quantile: domain errors") {
  CHECK_THROWS_AS(t_quantile(0.0, 5), argument_error);
  CHECK_THROWS_AS(t_quantile(1.0, 5), argument_error);
  CHECK_THROWS_AS(t_quantile(-0.2, 5), argument_error);
  CHECK_THROWS_AS(t_quantile(0.5, 0), argument_error);
}

TEST_CASE("confidence_interval: frozen examples and errors") {
  const ConfidenceInterval degen = confidence_interval(3.5, 0.0, 9, 0.05);
  CHECK(degen.lower == 3.5);
  CHECK(degen.upper == 3.5);

  // Large df converges to the normal quantile.
  const ConfidenceInterval wide = confidence_interval(0.0, 1.0, 1000000, 0.05);
  CHECK(std::fabs(wide.upper - 1.95996) <= 1e-4);

  const ConfidenceInterval t4 = confidence_interval(0.0, 1.0, 4, 0.05);
  CHECK(std::fabs(t4.upper - 2.776) <= 1e-3);
  CHECK(t4.lower == doctest::Approx(-t4.upper));

  CHECK_THROWS_AS(confidence_interval(0.0, -1.0, 4, 0.05), argument_error);
  CHECK_THROWS_AS(confidence_interval(0.0, 1.0, 0, 0.05), argument_error);
  CHECK_THROWS_AS(confidence_interval(0.0, 1.0, 4, 0.0), argument_error);
  CHECK_THROWS_AS(confidence_interval(0.0, 1.0, 4, 1.0), argument_error);
}
