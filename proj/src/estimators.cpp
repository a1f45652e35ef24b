// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mrvlab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mrvlab/errors.hpp"
#include "mrvlab/numeric.hpp"
#include "mrvlab/special_functions.hpp"

namespace mrvlab {

std::string to_string(EstimatorKind kind) {
  return kind == EstimatorKind::hte ? "HTE" : "SRE";
}

Estimate hte(std::span<const double> z) {
  const int n = static_cast<int>(z.size());
  if (n < 2) throw insufficient_sample_error("hte: needs n >= 2");
  Estimate est;
  est.method = EstimatorKind::hte;
  est.n = n;
  est.df = n - 1;
  est.point = mean(z);
  est.variance = centered_sum_squares(z, est.point) / (n - 1.0) / n;
  est.variance_method = VarianceMethod::naive;
  return est;
}

RegressionFit ols_fit(std::span<const double> x, std::span<const double> z) {
  const int n = static_cast<int>(x.size());
  if (x.size() != z.size()) throw argument_error("ols_fit: x and z differ in length");
  if (n < 3) throw insufficient_sample_error("ols_fit: needs n >= 3");

  RegressionFit fit;
  fit.xbar_sample = mean(x);
  fit.zbar_sample = mean(z);
  const double sxx = centered_sum_squares(x, fit.xbar_sample);
  if (sxx == 0.0) throw degenerate_covariate_error("ols_fit: covariate is constant");
  const double sxz = centered_sum_products(x, z, fit.xbar_sample, fit.zbar_sample);
  fit.slope = sxz / sxx;
  fit.intercept = fit.zbar_sample - fit.slope * fit.xbar_sample;
  fit.residuals.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    fit.residuals[k] = z[k] - (fit.intercept + fit.slope * x[k]);
  return fit;
}

Estimate sre(std::span<const double> x, std::span<const double> z, double xbar_pop,
             VarianceMethod variance_method) {
  const RegressionFit fit = ols_fit(x, z);
  const int n = static_cast<int>(x.size());

  Estimate est;
  est.method = EstimatorKind::sre;
  est.n = n;
  est.df = n - 2;
  est.point = fit.zbar_sample + fit.slope * (xbar_pop - fit.xbar_sample);

  // Decomposition check: the adjusted sample mean must equal the model
  // prediction at xbar_pop plus the mean residual.
  const double decomposed = fit.intercept + fit.slope * xbar_pop + mean(fit.residuals);
  if (std::fabs(est.point - decomposed) > 1e-8 * (1.0 + std::fabs(est.point)))
    throw error("sre: decomposition identity violated (ill-conditioned input)");

  est.variance_method = variance_method;
  est.variance = variance_method == VarianceMethod::naive
                     ? sre_variance_naive(fit, n)
                     : sre_variance_gweight(x, fit, xbar_pop);
  return est;
}

double sre_variance_naive(const RegressionFit& fit, int n) {
  if (n < 3) throw insufficient_sample_error("sre_variance_naive: needs n >= 3");
  if (static_cast<int>(fit.residuals.size()) != n)
    throw argument_error("sre_variance_naive: residual count does not match n");
  const double ebar = mean(fit.residuals);
  const double s2e = centered_sum_squares(fit.residuals, ebar) / (n - 2.0);
  return s2e / n;
}

double sre_variance_gweight(std::span<const double> x, const RegressionFit& fit,
                            double xbar_pop) {
  const int n = static_cast<int>(x.size());
  if (n < 3) throw insufficient_sample_error("sre_variance_gweight: needs n >= 3");
  if (fit.residuals.size() != x.size())
    throw argument_error("sre_variance_gweight: residual count does not match x");

  const double s2x = centered_sum_squares(x, fit.xbar_sample) / n;
  if (s2x == 0.0) throw degenerate_covariate_error("sre_variance_gweight: covariate is constant");
  const double dx = xbar_pop - fit.xbar_sample;

  std::vector<double> ge(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double g = 1.0 + dx * (x[k] - fit.xbar_sample) / s2x;
    ge[k] = g * fit.residuals[k];
  }
  const double gebar = mean(ge);
  return centered_sum_squares(ge, gebar) / (static_cast<double>(n) * (n - 1.0));
}

ConfidenceInterval confidence_interval(double point, double variance, int df, double alpha) {
  if (!(variance >= 0.0)) throw argument_error("confidence_interval: variance must be >= 0");
  if (df < 1) throw argument_error("confidence_interval: df must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw argument_error("confidence_interval: alpha must be in (0, 1)");
  const double half = t_quantile(1.0 - alpha / 2.0, df) * std::sqrt(variance);
  return ConfidenceInterval{point - half, point + half, alpha};
}

double t_quantile(double p, int df) {
  if (!(p > 0.0 && p < 1.0)) throw argument_error("t_quantile: p must be in (0, 1)");
  if (df < 1) throw argument_error("t_quantile: df must be >= 1");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -t_quantile(1.0 - p, df);

  const double nu = df;
  const auto cdf = [nu](double t) { return student_t_cdf(t, nu); };
  const auto pdf = [nu](double t) {
    const double logc = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                        0.5 * std::log(nu * std::numbers::pi);
    return std::exp(logc - ((nu + 1.0) / 2.0) * std::log1p(t * t / nu));
  };

  // Bracket the root, then safeguarded Newton.
  double lo = 0.0;
  double hi = std::max(2.0, normal_quantile(p) * 2.0);
  while (cdf(hi) < p) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) break;  // p indistinguishable from 1 at this df
  }
  double t = std::min(hi, std::max(lo, normal_quantile(p)));
  for (int iter = 0; iter < 100; ++iter) {
    const double err = cdf(t) - p;
    if (err > 0.0)
      hi = t;
    else
      lo = t;
    const double dens = pdf(t);
    double next = dens > 0.0 ? t - err / dens : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::fabs(next - t);
    t = next;
    if (step <= 1e-12 * std::max(1.0, std::fabs(t))) break;
  }
  return t;
}

}  // namespace mrvlab
