#pragma once

//
// Bernstein-type tail bound evaluators with their explicit constants, the
// clipped linear transforms they apply to, and the Monte-Carlo lab that
// checks empirical tails of sums against the bounds.
//

#include <vector>

#include "tsrobust/linalg.hpp"
#include "tsrobust/process.hpp"
#include "tsrobust/rng.hpp"

namespace tsr {

struct BoundParams {
  double rho0 = 0.5;   // in (0,1)
  double tau = 1.0;    // >= 1
  double gamma = 1.0;  // >= 1
  double sigma = 1.0;  // innovation sd
  double m_bound = 1.0;  // uniform bound on the transform
  double n = 1.0;        // sample size

  // C1 = 16 e^2 / (sqrt(2 pi) rho0^4 log(1/rho0)^3), C2 = 8 e / log(1/rho0)
  double c1() const;
  double c2() const;
};

// 2 exp{-x^2 / (C1 n sigma^2 tau^2 gamma^2 + C2 tau M x)}
double bernstein_bound(double x, const BoundParams& params);
double bernstein_bound_clipped(double x, const BoundParams& params);

// Exponential-moment variant 2 exp{-x^2 / (C3 n theta^2 tau^2 gamma^2 + C4
// gamma tau x)}; C3 and C4 have no closed form and are caller-supplied.
double bernstein_bound_expmoment(double x, double n, double theta, double gamma,
                                 double tau, double c3, double c4);

// Classical independent-case reference curve exp{-x^2/(2 n sigma^2 + 2Mx/3)}.
double classical_bernstein(double x, double n, double sigma2, double m_bound);

struct LipschitzTransform {
  Vector coefficients;  // a_j, |a|_1 = 1
  Vector weights;       // |a_j|
  double clip = 1.0;    // M

  double operator()(const Vector& x) const;
};

// G(x) = sum_j a_j clip(x_j, +-M); Lipschitz weights |a_j|, bound M.
LipschitzTransform clipped_linear_transform(const Vector& a, double m_bound);

struct ProcessModel {
  Matrix A;  // VAR(1) transition; zero matrix gives the i.i.d. case
  InnovationDist innov = InnovationDist::gaussian(1.0);

  static ProcessModel iid(int p, InnovationDist innov = InnovationDist::gaussian(1.0));
  static ProcessModel ar1(double coefficient,
                          InnovationDist innov = InnovationDist::gaussian(1.0));
};

struct TailRow {
  double x = 0.0;
  double empirical = 0.0;
  double bound = 0.0;  // clipped Theorem-2.1 bound
  double stderr_ = 0.0;
};

struct TailTable {
  std::vector<TailRow> rows;
  BoundParams params;
  double eg_hat = 0.0;      // long-prerun estimate of E G(X_i)
  double prerun_se = 0.0;   // batch-means standard error of eg_hat
};

// {0.5, 1, ..., 5} * sqrt(n sigma^2) * gamma * tau
std::vector<double> default_x_grid(const BoundParams& params);

// Estimates E G from one long stationary pre-run (length >= 1e5 * tau), then
// tallies S = sum_{i<=n} (G(X_i) - EG_hat) over `reps` replications.  The
// prerun uncertainty is folded into the stderr column.
TailTable empirical_tail(const ProcessModel& model, const LipschitzTransform& g,
                         int n, const std::vector<double>& x_grid, int reps,
                         Rng& rng, double rho0 = 0.5);

struct MeanRateRow {
  int n = 0;
  double mean_error = 0.0;  // mean l-infinity error of the Huber mean
  double bound = 0.0;
};

struct MeanRateTable {
  std::vector<MeanRateRow> rows;
  double slope = 0.0;  // OLS slope of log mean error on log n
};

// Robust-mean error against n for i.i.d. standardized t(5) data.
MeanRateTable mean_bound_check(const std::vector<int>& n_list, int p, int reps,
                               Rng& rng, double bound_c = 1.0);

}  // namespace tsr
