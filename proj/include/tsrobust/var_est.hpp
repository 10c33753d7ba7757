#pragma once

//
// Robust estimation of the VAR(1) transition matrix: elementwise truncation,
// the lasso row problems, robust autocovariances, the Dantzig column
// programs, the plain (untruncated) baselines, error norms and the
// theoretical rate evaluators.
//

#include <string>
#include <vector>

#include "tsrobust/linalg.hpp"

namespace tsr {

struct TruncatedSeries {
  Matrix X_tilde;
  double nu = 0.0;
};

// Elementwise clip to [-nu, nu]; nu = +inf is the identity.
TruncatedSeries truncate(const Matrix& x, double nu);

// Sigma_hat_k = (1/n) sum_{i=1..n} Xt_{i-k} Xt_i', k in {0, 1}, where the
// sample rows are X_0..X_n.
Matrix autocov_robust(const Matrix& x, double nu, int k);

struct LassoRowResult {
  Vector b;
  bool converged = false;
  double kkt_residual = 0.0;  // max KKT violation, absolute
  int sweeps = 0;
};

// Cyclic coordinate descent with exact univariate soft-threshold updates for
// (1/n)|y - Z b|_2^2 + lambda |b|_1; stops once the largest coordinate change
// in a sweep is below 1e-9 and the KKT residual verifies within 1e-6*lambda.
LassoRowResult lasso_row(const Matrix& z, const Vector& y, double lambda,
                         const Vector* warm_start = nullptr);

struct SubproblemDiag {
  bool ok = false;
  double kkt_residual = 0.0;     // lasso rows
  double feasibility_gap = 0.0;  // dantzig columns: |S b - c|_inf - lambda
  double duality_gap = 0.0;      // dantzig columns
  int iterations = 0;
};

struct VarEstimate {
  Matrix A_hat;
  std::string method;  // lasso | dantzig | lasso_plain | dantzig_plain
  double nu = 0.0;
  double lambda = 0.0;
  std::vector<SubproblemDiag> diagnostics;  // one per row (lasso) or column (dantzig)

  bool all_ok() const;
  double max_kkt_residual() const;
  double max_feasibility_gap() const;
};

struct DantzigDiag {
  double feasibility_gap = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

// min |b|_1 subject to |sigma0 b - c|_inf <= lambda, solved as a dense LP
// through its dual (the dual's slack basis is always feasible, so no
// phase-1); an infeasible program throws InfeasibleError with the violation.
Vector dantzig_column(const Matrix& sigma0, const Vector& c, double lambda,
                      DantzigDiag* diag = nullptr);

VarEstimate robust_lasso_var(const Matrix& x, double nu, double lambda);
VarEstimate robust_dantzig_var(const Matrix& x, double nu, double lambda);
VarEstimate plain_lasso_var(const Matrix& x, double lambda);
VarEstimate plain_dantzig_var(const Matrix& x, double lambda);

// One truncation/Gram (or autocovariance) pass shared across a descending
// lambda path, with warm starts in the lasso case.  Infeasible Dantzig
// lambdas yield entries with all_ok() == false instead of throwing.
std::vector<VarEstimate> lasso_var_path(const Matrix& x, double nu,
                                        const std::vector<double>& lambdas);
std::vector<VarEstimate> dantzig_var_path(const Matrix& x, double nu,
                                          const std::vector<double>& lambdas);

NormSet estimation_errors(const Matrix& a_hat, const Matrix& a);

// Right-hand sides of the lasso/Dantzig convergence rates as pure functions;
// exponent (q-2)/(2q-2) on log(p)/n throughout.
double lasso_rate_linf(double c, double mu_q, double gamma, double tau,
                       double a_linf, double s, double n, double p, double q);
double lasso_rate_frobenius(double c, double mu_q, double gamma, double tau,
                            double a_linf, double total_support, double n,
                            double p, double q);
double dantzig_rate_max(double c, double mu_q, double gamma, double tau,
                        double sigma0_inv_l1, double a_l1, double n, double p,
                        double q);
double dantzig_rate_l1(double c, double mu_q, double gamma, double tau,
                       double sigma0_inv_l1, double a_l1, double s_star,
                       double n, double p, double q);

}  // namespace tsr
