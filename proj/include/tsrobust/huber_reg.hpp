#pragma once

//
// Weighted l1-penalized Huber regression: the covariate weight function
// w(x) = min{1, b/|Bx|_2}, a proximal-gradient solver with backtracking, and
// holdout grid-search tuning over (nu, lambda).
//

#include <limits>
#include <vector>

#include "tsrobust/linalg.hpp"

namespace tsr {

struct WeightSpec {
  Matrix B;  // empty means identity
  double b = std::numeric_limits<double>::infinity();  // +inf disables the weight
  double lambda_min_B = 1.0;

  // b = +inf turns the weight off (w == 1 everywhere).
  static WeightSpec off() { return WeightSpec{}; }
  static WeightSpec identity(double b);
  static WeightSpec with_matrix(Matrix B, double b);

  bool active() const { return std::isfinite(b); }
  double b0() const { return b / lambda_min_B; }
};

// min{1, b/|Bx|_2}; w(0) = 1 by the limit convention.
double weight(const Vector& x, const WeightSpec& spec);

struct HuberConfig {
  double nu = 1.0;
  double lambda = 0.0;
  WeightSpec weight = WeightSpec::off();
  int max_iter = 10000;
  double tol = 1e-8;              // l-infinity change of successive iterates
  double backtrack_shrink = 0.5;  // step shrink factor when the line test fails
};

struct FitResult {
  Vector beta_hat;
  std::vector<double> objective_trace;  // non-increasing by construction
  bool converged = false;
  std::vector<int> active_set;
  double kkt_residual = std::numeric_limits<double>::quiet_NaN();
  double nu = 0.0;
  double lambda = 0.0;
  int iterations = 0;
};

double huber_reg_objective(const Matrix& x, const Vector& y, const Vector& beta,
                           const HuberConfig& cfg);

FitResult huber_reg_fit(const Matrix& x, const Vector& y, const HuberConfig& cfg);

struct TuneResult {
  double nu = 0.0;
  double lambda = 0.0;
  FitResult fit;
  double holdout_mse = std::numeric_limits<double>::quiet_NaN();
  int fits_tried = 0;
  int fits_converged = 0;
};

// Fits every (nu, lambda) pair, keeps the one with the smallest mean squared
// prediction error on the holdout; ties break to smaller nu then smaller
// lambda.  Throws TuningFailedError when no fit converges.  `base` supplies
// the weight spec and solver settings shared by all fits.
TuneResult huber_reg_tune(const Matrix& x, const Vector& y,
                          std::vector<double> nu_grid,
                          std::vector<double> lambda_grid, const Matrix& x_holdout,
                          const Vector& y_holdout,
                          const HuberConfig& base = HuberConfig{});

// sigma_hat * sqrt(n/log p) * {1/4, 1/2, 1, 2, 4}, MAD-based pilot scale of y.
std::vector<double> default_nu_grid(const Matrix& x, const Vector& y);

// Geometric 10-point grid from the zero-shrinkage threshold |grad at 0|_inf
// down by a factor 10^3, evaluated at the pilot nu.
std::vector<double> default_lambda_grid(const Matrix& x, const Vector& y,
                                        double nu, const WeightSpec& weight);

}  // namespace tsr
