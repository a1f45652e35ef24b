// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Synthetic geostatistical populations on a regular grid.
//
// A population's target variable z decomposes as z = x + delta + shift,
// where x is a spatially correlated covariate, delta an independent
// residual field, and shift a constant placing the mean exactly at its
// target.  Both fields are zero-mean Gaussian with a spherical covariance.
// After generation the fields are calibrated: delta is orthogonalized
// against x over the population, both fields are rescaled to their exact
// target variances, and z is shifted to its exact target mean.  This makes
// the population mean, variance, and squared covariate correlation exact
// quantities rather than seed-dependent ones.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mrvlab {

/// Spherical covariance model parameters.  Distances are in grid-cell units.
struct CovarianceSpec {
  double sill = 1.0;    // variance at lag 0 (nugget excluded)
  double range = 1.0;   // correlation length; covariance is 0 beyond it
  double nugget = 0.0;  // micro-scale discontinuity; fixed at 0 here

  void validate() const;
};

/// C(h) = sill * (1 - 1.5 h/a + 0.5 (h/a)^3) for h < a, 0 for h >= a,
/// and C(0) = sill + nugget.  Throws argument_error for h < 0.
double spherical_cov(double h, const CovarianceSpec& spec);

struct PopulationSpec {
  int grid_rows = 512;
  int grid_cols = 512;
  double target_var_z = 900.0;  // total population variance of z
  double target_r2 = 0.3;       // squared population correlation of x with z
  double target_mean = 1.0;     // exact population mean of z
  CovarianceSpec cov_x;         // sill must equal target_r2 * target_var_z
  CovarianceSpec cov_delta;     // sill must equal (1 - target_r2) * target_var_z
  std::uint64_t seed = 0;

  void validate() const;
};

/// Fills in the field sills implied by (target_var_z, target_r2):
/// sill_x = r2 * var_z and sill_delta = (1 - r2) * var_z, so that
/// r2 = Var(x) / Var(z) once the fields are independent.
PopulationSpec make_population_spec(int grid_rows, int grid_cols, double target_var_z,
                                    double target_r2, double target_mean, double range_x,
                                    double range_delta, std::uint64_t seed);

/// One synthetic reality: gridded values plus their exact statistics.
/// Immutable after construction; safe to share across threads.
struct Population {
  PopulationSpec spec;
  std::vector<double> z;         // target variable, row-major
  std::vector<double> x;         // correlated covariate (zero mean)
  std::vector<double> x_uncorr;  // covariate decorrelated from z

  double mu = 0.0;                // exact population mean of z
  double xbar_pop = 0.0;          // exact population mean of x
  double xbar_uncorr_pop = 0.0;   // exact population mean of x_uncorr
  double var_z = 0.0;             // exact population variances (divisor N)
  double var_x = 0.0;
  double var_delta = 0.0;
  double r2_realized = 0.0;       // exact squared correlation of x with z

  std::int64_t size() const { return static_cast<std::int64_t>(z.size()); }
};

enum class FieldMethod {
  automatic,  // circulant for grids larger than 64x64, dense otherwise
  circulant,  // FFT sampling on the torus; exact for range <= min(R,C)/2
  dense,      // symmetric square root of the full covariance matrix
};

/// Zero-mean Gaussian random field with the given spherical covariance on
/// the rows x cols torus.  Deterministic given the seed.  Throws
/// config_error if the grid cannot embed the range (range > min(R,C)/2)
/// or is smaller than 8x8.
std::vector<double> generate_field(const CovarianceSpec& spec, int rows, int cols,
                                   std::uint64_t seed,
                                   FieldMethod method = FieldMethod::automatic);

/// Removes the least-squares projection of x_raw onto z, then restores the
/// mean and variance of x_raw.  The result has exactly zero population
/// correlation with z.  Throws degenerate_input_error when z is constant or
/// the projection residual has zero variance (e.g. x_raw == z).
std::vector<double> decorrelate(std::span<const double> x_raw, std::span<const double> z);

/// Builds the calibrated population for a spec.  Field seeds for x, delta,
/// and x_uncorr are derived independently from spec.seed.
Population build_population(const PopulationSpec& spec);

/// Empirical semivariogram of a gridded field at the given (drow, dcol)
/// offsets, using all non-wrapping cell pairs per offset.
std::vector<double> semivariogram(std::span<const double> field, int rows, int cols,
                                  std::span<const std::pair<int, int>> offsets);

/// Debug dump: headered CSV with columns cell_row, cell_col, z, x, x_uncorr.
void dump_population_csv(const Population& pop, const std::string& path);

}  // namespace mrvlab
