// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Special functions backing Student-t quantiles and p-values.  Implemented
// locally so the correctness-critical path carries no external dependency.

#pragma once

namespace mrvlab {

/// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
/// Continued-fraction evaluation (modified Lentz), switching tails at the
/// usual pivot so the fraction always converges quickly.
double reg_inc_beta(double a, double b, double x);

/// Standard normal quantile (Acklam's rational approximation, refined with
/// one Halley step; |error| < 1e-12 over (0, 1)).
double normal_quantile(double p);

/// Student-t CDF for df >= 1.
double student_t_cdf(double t, double df);

/// Two-tailed tail probability P(|T_df| >= |t|).
double student_t_two_tailed_p(double t, double df);

}  // namespace mrvlab
