// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace mrvlab {

/// Base class for all mrvlab errors.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scalar argument is outside its documented domain.
struct argument_error : error {
  using error::error;
};

/// A spec (covariance, population, run configuration) is internally invalid.
struct config_error : error {
  using error::error;
};

/// Input data is degenerate for the requested operation (constant target,
/// zero residual variance, zero Monte Carlo variance).
struct degenerate_input_error : error {
  using error::error;
};

/// The covariate is constant, so a regression fit is undefined.
struct degenerate_covariate_error : degenerate_input_error {
  using degenerate_input_error::degenerate_input_error;
};

/// Too few observations (or replicates) for the requested statistic.
struct insufficient_sample_error : error {
  using error::error;
};

/// Output files could not be written.
struct io_error : error {
  using error::error;
};

}  // namespace mrvlab
