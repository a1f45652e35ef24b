// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Design-based and model-assisted estimators of a population mean under
// simple random sampling:
//
//   HTE  — the sample mean, with sampling variance S^2(z)/n.
//   SRE  — the simple regression estimator: the sample mean adjusted by
//          slope * (population covariate mean - sample covariate mean),
//          with either the naive residual-variance estimator S^2(e)/n or
//          the g-weight estimator that accounts for the fitted parameters.
//
// All operations are pure functions of their inputs.

#pragma once

#include <span>
#include <string>
#include <vector>

namespace mrvlab {

enum class EstimatorKind { hte, sre };
enum class VarianceMethod { naive, gweight };

std::string to_string(EstimatorKind kind);

/// Point estimate with its sampling-variance estimate.
struct Estimate {
  EstimatorKind method = EstimatorKind::hte;
  double point = 0.0;     // estimated population mean
  double variance = 0.0;  // estimated sampling variance, >= 0
  VarianceMethod variance_method = VarianceMethod::naive;
  int n = 0;
  int df = 0;  // degrees of freedom for the confidence interval
};

/// Ordinary least squares fit of z on x with intercept.
struct RegressionFit {
  double intercept = 0.0;
  double slope = 0.0;
  std::vector<double> residuals;  // sum to 0; orthogonal to x over the sample
  double xbar_sample = 0.0;
  double zbar_sample = 0.0;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.05;

  bool contains(double value) const { return lower <= value && value <= upper; }
};

/// Sample mean with variance S^2(z)/n (divisor n-1), df = n-1.
/// Throws insufficient_sample_error for n < 2.
Estimate hte(std::span<const double> z);

/// OLS fit; throws insufficient_sample_error for n < 3 and
/// degenerate_covariate_error when x is constant.
RegressionFit ols_fit(std::span<const double> x, std::span<const double> z);

/// Simple regression estimator.  The point estimate is
/// zbar_S + slope * (xbar_pop - xbar_S); the variance is filled by the
/// chosen variance method; df = n-2.
Estimate sre(std::span<const double> x, std::span<const double> z, double xbar_pop,
             VarianceMethod variance_method = VarianceMethod::gweight);

/// S^2(e)/n with divisor n-2 (two fitted parameters).
double sre_variance_naive(const RegressionFit& fit, int n);

/// g-weight variance: (1/(n(n-1))) sum_k (g_k e_k - mean(g e))^2 with
/// g_k = 1 + (xbar_pop - xbar_S)(x_k - xbar_S) / s2_x, s2_x the divisor-n
/// sample variance of x.  Always >= 0.
double sre_variance_gweight(std::span<const double> x, const RegressionFit& fit,
                            double xbar_pop);

/// point +/- t_{1-alpha/2, df} * sqrt(variance).
ConfidenceInterval confidence_interval(double point, double variance, int df, double alpha);

inline ConfidenceInterval confidence_interval(const Estimate& est, double alpha) {
  return confidence_interval(est.point, est.variance, est.df, alpha);
}

/// Student-t quantile via the inverse regularized incomplete beta function;
/// absolute tolerance better than 1e-8.  Throws argument_error unless
/// 0 < p < 1 and df >= 1.
double t_quantile(double p, int df);

}  // namespace mrvlab
