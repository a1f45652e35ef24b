// Copyright (c) 2026 The mrvlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "mrvlab/geofield.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <random>
#include <span>

#include "mrvlab/errors.hpp"
#include "mrvlab/numeric.hpp"
#include "mrvlab/rng.hpp"

namespace mrvlab {

namespace {

constexpr std::uint64_t kTagFieldX = 0x706F702D78ull;
constexpr std::uint64_t kTagFieldDelta = 0x706F702D64ull;
constexpr std::uint64_t kTagFieldUncorr = 0x706F702D75ull;

// FFTW plan creation/destruction is not thread-safe; execution of distinct
// plans is.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

void fft2d_inplace(int rows, int cols, std::vector<std::complex<double>>& data, int sign) {
  fftw_plan plan;
  {
    const std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_2d(rows, cols, reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()), sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw error("fftw plan creation failed");
  fftw_execute(plan);
  {
    const std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

double torus_distance(int i, int j, int rows, int cols) {
  const double di = std::min(i, rows - i);
  const double dj = std::min(j, cols - j);
  return std::hypot(di, dj);
}

// Exact sampling on the torus: the covariance matrix is block-circulant
// with circulant blocks, so its eigenvalues are the 2D DFT of the base
// covariance.  With range <= min(rows, cols)/2 the base is the one-term
// periodization of a positive-definite planar model, so the eigenvalues
// are nonnegative up to rounding.
std::vector<double> sample_circulant(const CovarianceSpec& spec, int rows, int cols,
                                     std::uint64_t seed) {
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  std::vector<std::complex<double>> buf(n);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      buf[static_cast<std::size_t>(i) * cols + j] =
          spherical_cov(torus_distance(i, j, rows, cols), spec);

  fft2d_inplace(rows, cols, buf, FFTW_FORWARD);

  std::vector<double> sqrt_lambda(n);
  double max_lambda = 0.0;
  for (const auto& v : buf) max_lambda = std::max(max_lambda, v.real());
  const double floor = -1e-9 * std::max(max_lambda, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double lambda = buf[k].real();
    if (lambda < floor)
      throw config_error("circulant embedding produced negative eigenvalues; "
                         "the grid is too small for the covariance range");
    sqrt_lambda[k] = std::sqrt(std::max(lambda, 0.0));
  }

  std::mt19937_64 gen(seed);
  NormalSampler normal;
  for (std::size_t k = 0; k < n; ++k) {
    const double re = normal(gen);
    const double im = normal(gen);
    buf[k] = sqrt_lambda[k] * std::complex<double>(re, im);
  }
  fft2d_inplace(rows, cols, buf, FFTW_BACKWARD);

  std::vector<double> field(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) field[k] = buf[k].real() * scale;
  return field;
}

// Dense route for small grids: symmetric square root of the full torus
// covariance matrix.  Used below 64x64 and as the cross-validation
// reference for the circulant sampler.
std::vector<double> sample_dense(const CovarianceSpec& spec, int rows, int cols,
                                 std::uint64_t seed) {
  const int n = rows * cols;
  Eigen::MatrixXd cov(n, n);
  for (int p = 0; p < n; ++p) {
    const int pi = p / cols, pj = p % cols;
    for (int q = 0; q <= p; ++q) {
      const int qi = q / cols, qj = q % cols;
      const int di = std::abs(pi - qi);
      const int dj = std::abs(pj - qj);
      const double value = spherical_cov(torus_distance(di, dj, rows, cols), spec);
      cov(p, q) = value;
      cov(q, p) = value;
    }
  }

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success)
    throw error("dense covariance factorization failed to converge");
  const double max_eig = solver.eigenvalues().maxCoeff();
  if (solver.eigenvalues().minCoeff() < -1e-9 * std::max(max_eig, 1.0))
    throw config_error("covariance matrix is not nonnegative-definite; "
                       "the grid is too small for the covariance range");
  const Eigen::VectorXd sqrt_eigs = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd root =
      solver.eigenvectors() * sqrt_eigs.asDiagonal() * solver.eigenvectors().transpose();

  std::mt19937_64 gen(seed);
  NormalSampler normal;
  Eigen::VectorXd noise(n);
  for (int k = 0; k < n; ++k) noise[k] = normal(gen);
  const Eigen::VectorXd sampled = root * noise;

  std::vector<double> field(n);
  Eigen::VectorXd::Map(field.data(), n) = sampled;
  return field;
}

void subtract_mean(std::vector<double>& v) {
  const double m = mean(v);
  for (double& t : v) t -= m;
}

}  // namespace

void CovarianceSpec::validate() const {
  if (!(sill >= 0.0) || !std::isfinite(sill))
    throw config_error("covariance: sill must be finite and >= 0");
  if (!(range > 0.0) || !std::isfinite(range))
    throw config_error("covariance: range must be finite and > 0");
  if (nugget != 0.0) throw config_error("covariance: nugget is fixed at 0");
}

double spherical_cov(double h, const CovarianceSpec& spec) {
  spec.validate();
  if (h < 0.0) throw argument_error("spherical_cov: distance must be >= 0");
  if (h == 0.0) return spec.sill + spec.nugget;
  if (h >= spec.range) return 0.0;
  const double u = h / spec.range;
  return spec.sill * (1.0 - 1.5 * u + 0.5 * u * u * u);
}

void PopulationSpec::validate() const {
  if (grid_rows < 8 || grid_cols < 8)
    throw config_error("population: grid must be at least 8x8");
  if (!(target_var_z >= 0.0)) throw config_error("population: target_var_z must be >= 0");
  if (!(target_r2 >= 0.0 && target_r2 < 1.0))
    throw config_error("population: target_r2 must be in [0, 1)");
  cov_x.validate();
  cov_delta.validate();
  const double tol = 1e-9 * std::max(1.0, target_var_z);
  if (std::fabs(cov_x.sill - target_r2 * target_var_z) > tol)
    throw config_error("population: cov_x.sill must equal target_r2 * target_var_z");
  if (std::fabs(cov_delta.sill - (1.0 - target_r2) * target_var_z) > tol)
    throw config_error("population: cov_delta.sill must equal (1 - target_r2) * target_var_z");
}

PopulationSpec make_population_spec(int grid_rows, int grid_cols, double target_var_z,
                                    double target_r2, double target_mean, double range_x,
                                    double range_delta, std::uint64_t seed) {
  PopulationSpec spec;
  spec.grid_rows = grid_rows;
  spec.grid_cols = grid_cols;
  spec.target_var_z = target_var_z;
  spec.target_r2 = target_r2;
  spec.target_mean = target_mean;
  spec.cov_x = CovarianceSpec{target_r2 * target_var_z, range_x, 0.0};
  spec.cov_delta = CovarianceSpec{(1.0 - target_r2) * target_var_z, range_delta, 0.0};
  spec.seed = seed;
  spec.validate();
  return spec;
}

std::vector<double> generate_field(const CovarianceSpec& spec, int rows, int cols,
                                   std::uint64_t seed, FieldMethod method) {
  spec.validate();
  if (rows < 8 || cols < 8) throw config_error("generate_field: grid must be at least 8x8");
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  if (spec.sill == 0.0) return std::vector<double>(n, 0.0);
  if (spec.range > std::min(rows, cols) / 2.0)
    throw config_error("generate_field: grid too small for the covariance range "
                       "(need range <= min(rows, cols)/2)");

  if (method == FieldMethod::automatic)
    method = n > 64 * 64 ? FieldMethod::circulant : FieldMethod::dense;
  return method == FieldMethod::circulant ? sample_circulant(spec, rows, cols, seed)
                                          : sample_dense(spec, rows, cols, seed);
}

std::vector<double> decorrelate(std::span<const double> x_raw, std::span<const double> z) {
  if (x_raw.size() != z.size()) throw argument_error("decorrelate: length mismatch");
  if (x_raw.size() < 3) throw argument_error("decorrelate: needs length >= 3");
  const double count = static_cast<double>(z.size());

  const double zbar = mean(z);
  const double var_z = centered_sum_squares(z, zbar) / count;
  if (var_z == 0.0) throw degenerate_input_error("decorrelate: z is constant");

  const double xbar = mean(x_raw);
  const double var_x = centered_sum_squares(x_raw, xbar) / count;
  const double slope = centered_sum_products(x_raw, z, xbar, zbar) / count / var_z;

  std::vector<double> out(x_raw.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = x_raw[k] - slope * (z[k] - zbar);

  const double ubar = mean(out);
  const double var_u = centered_sum_squares(out, ubar) / count;
  if (var_u == 0.0)
    throw degenerate_input_error("decorrelate: projection residual has zero variance");

  const double rescale = std::sqrt(var_x / var_u);
  for (double& v : out) v = xbar + (v - ubar) * rescale;
  return out;
}

Population build_population(const PopulationSpec& spec) {
  spec.validate();
  const std::size_t n = static_cast<std::size_t>(spec.grid_rows) * spec.grid_cols;
  const double count = static_cast<double>(n);

  Population pop;
  pop.spec = spec;
  pop.x = generate_field(spec.cov_x, spec.grid_rows, spec.grid_cols,
                         derive_seed(spec.seed, {kTagFieldX}));
  std::vector<double> delta = generate_field(spec.cov_delta, spec.grid_rows, spec.grid_cols,
                                             derive_seed(spec.seed, {kTagFieldDelta}));

  // Calibration: exact zero means, exact orthogonality of delta to x, exact
  // target variances, exact target mean of z.  This turns the controlled
  // quantities (mu, Var(z), r2) into sharp constants instead of
  // seed-dependent realizations.
  subtract_mean(pop.x);
  subtract_mean(delta);

  const double var_x_raw = centered_sum_squares(pop.x, 0.0) / count;
  if (var_x_raw > 0.0) {
    const double cross = centered_sum_products(delta, pop.x, 0.0, 0.0) / count;
    const double proj = cross / var_x_raw;
    for (std::size_t k = 0; k < n; ++k) delta[k] -= proj * pop.x[k];

    const double scale_x = std::sqrt(spec.cov_x.sill / var_x_raw);
    for (double& v : pop.x) v *= scale_x;
  }
  const double var_delta_raw = centered_sum_squares(delta, mean(delta)) / count;
  if (var_delta_raw > 0.0) {
    const double scale_delta = std::sqrt(spec.cov_delta.sill / var_delta_raw);
    for (double& v : delta) v *= scale_delta;
  }

  pop.z.resize(n);
  for (std::size_t k = 0; k < n; ++k) pop.z[k] = pop.x[k] + delta[k];
  const double shift = spec.target_mean - mean(pop.z);
  for (double& v : pop.z) v += shift;

  // Uncorrelated covariate: iid normal draws, decorrelated from z.  Its
  // scale is irrelevant to the estimators (affine invariance); mirror the
  // correlated covariate's variance when it is nonzero.
  const double uncorr_sd = std::sqrt(spec.cov_x.sill > 0.0 ? spec.cov_x.sill : 1.0);
  std::vector<double> raw(n);
  std::mt19937_64 gen(derive_seed(spec.seed, {kTagFieldUncorr}));
  NormalSampler normal;
  for (double& v : raw) v = uncorr_sd * normal(gen);
  pop.x_uncorr = decorrelate(raw, pop.z);

  pop.mu = mean(pop.z);
  pop.xbar_pop = mean(pop.x);
  pop.xbar_uncorr_pop = mean(pop.x_uncorr);
  pop.var_z = population_variance(pop.z);
  pop.var_x = population_variance(pop.x);
  pop.var_delta = population_variance(delta);
  if (pop.var_x > 0.0) {
    const double cov_xz = population_covariance(pop.x, pop.z);
    pop.r2_realized = cov_xz * cov_xz / (pop.var_x * pop.var_z);
  } else {
    pop.r2_realized = 0.0;
  }
  return pop;
}

std::vector<double> semivariogram(std::span<const double> field, int rows, int cols,
                                  std::span<const std::pair<int, int>> offsets) {
  if (field.size() != static_cast<std::size_t>(rows) * cols)
    throw argument_error("semivariogram: field size does not match the grid");
  std::vector<double> gamma;
  gamma.reserve(offsets.size());
  for (const auto& [dr, dc] : offsets) {
    if (dr == 0 && dc == 0) throw argument_error("semivariogram: zero offset");
    if (std::abs(dr) >= rows || std::abs(dc) >= cols)
      throw argument_error("semivariogram: offset exceeds the grid");
    const int r_begin = std::max(0, -dr), r_end = std::min(rows, rows - dr);
    const int c_begin = std::max(0, -dc), c_end = std::min(cols, cols - dc);
    double sum = 0.0;
    std::int64_t pairs = 0;
    for (int r = r_begin; r < r_end; ++r) {
      const double* row_a = field.data() + static_cast<std::size_t>(r) * cols;
      const double* row_b = field.data() + static_cast<std::size_t>(r + dr) * cols;
      for (int c = c_begin; c < c_end; ++c) {
        const double d = row_a[c] - row_b[c + dc];
        sum += d * d;
        ++pairs;
      }
    }
    gamma.push_back(pairs > 0 ? 0.5 * sum / static_cast<double>(pairs) : 0.0);
  }
  return gamma;
}

void dump_population_csv(const Population& pop, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("dump_population_csv: cannot open " + path);
  out << "cell_row,cell_col,z,x,x_uncorr\n";
  char line[160];
  for (int r = 0; r < pop.spec.grid_rows; ++r) {
    for (int c = 0; c < pop.spec.grid_cols; ++c) {
      const std::size_t k = static_cast<std::size_t>(r) * pop.spec.grid_cols + c;
      std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g,%.17g\n", r, c, pop.z[k], pop.x[k],
                    pop.x_uncorr[k]);
      out << line;
    }
  }
  if (!out) throw io_error("dump_population_csv: write failed for " + path);
}

}  // namespace mrvlab
