#include "tsrobust/var_est.hpp"

#include <algorithm>
#include <cmath>

#include "tsrobust/errors.hpp"
#include "tsrobust/huber.hpp"
#include "tsrobust/simplex.hpp"

namespace tsr {

TruncatedSeries truncate(const Matrix& x, double nu) {
  if (!(nu > 0.0)) throw InvalidInput("truncate: nu must be > 0");
  require_finite(x, "truncate");
  TruncatedSeries out;
  out.nu = nu;
  if (std::isinf(nu)) {
    out.X_tilde = x;
  } else {
    out.X_tilde = x.cwiseMax(-nu).cwiseMin(nu);
  }
  return out;
}

Matrix autocov_robust(const Matrix& x, double nu, int k) {
  if (k != 0 && k != 1) throw InvalidInput("autocov_robust: k must be 0 or 1");
  const Eigen::Index n = x.rows() - 1;
  if (n < 1) throw InvalidInput("autocov_robust: need at least two rows");
  const Matrix xt = truncate(x, nu).X_tilde;
  const double inv_n = 1.0 / static_cast<double>(n);
  if (k == 0) {
    const auto recent = xt.bottomRows(n);
    return inv_n * (recent.transpose() * recent);
  }
  return inv_n * (xt.topRows(n).transpose() * xt.bottomRows(n));
}

namespace {

constexpr double kSweepTol = 1e-9;
constexpr int kSweepCap = 100000;
constexpr double kKktRel = 1e-6;

double lasso_kkt(const Vector& grad, const Vector& b, double lambda) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    double viol;
    if (b[j] != 0.0) {
      viol = std::abs(grad[j] + lambda * (b[j] > 0.0 ? 1.0 : -1.0));
    } else {
      viol = std::max(0.0, std::abs(grad[j]) - lambda);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

// Coordinate descent over the Gram form; `gram` is (2/n) Z'Z and `lin` is
// (2/n) Z'y, so the smooth gradient is gram*b - lin.
LassoRowResult lasso_cd(const Matrix& gram, const Vector& lin, double lambda,
                        const Vector* warm_start) {
  const Eigen::Index p = gram.rows();
  LassoRowResult out;
  out.b = warm_start != nullptr ? *warm_start : Vector::Zero(p);
  Vector gb = gram * out.b;

  for (out.sweeps = 0; out.sweeps < kSweepCap; ++out.sweeps) {
    double max_change = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
      const double diag = gram(j, j);
      const double old = out.b[j];
      double nb = 0.0;
      if (diag > 0.0) {
        const double c = lin[j] - gb[j] + diag * old;
        nb = soft_threshold(c, lambda) / diag;
      }
      const double delta = nb - old;
      if (delta != 0.0) {
        gb += delta * gram.col(j);
        out.b[j] = nb;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (max_change < kSweepTol) {
      gb = gram * out.b;  // fresh product before certifying
      out.kkt_residual = lasso_kkt(gb - lin, out.b, lambda);
      if (lambda == 0.0 || out.kkt_residual <= 0.5 * kKktRel * lambda) {
        out.converged = true;
        ++out.sweeps;
        return out;
      }
    }
  }
  gb = gram * out.b;
  out.kkt_residual = lasso_kkt(gb - lin, out.b, lambda);
  out.converged = out.kkt_residual <= kKktRel * std::max(lambda, 0.0) && lambda > 0.0;
  return out;
}

}  // namespace

LassoRowResult lasso_row(const Matrix& z, const Vector& y, double lambda,
                         const Vector* warm_start) {
  if (z.rows() != y.size()) throw ShapeError("lasso_row: Z/y mismatch");
  if (lambda < 0.0) throw InvalidInput("lasso_row: lambda must be >= 0");
  require_finite(z, "lasso_row");
  require_finite(y, "lasso_row");
  const double inv_n = 2.0 / static_cast<double>(z.rows());
  const Matrix gram = inv_n * (z.transpose() * z);
  const Vector lin = inv_n * (z.transpose() * y);
  return lasso_cd(gram, lin, lambda, warm_start);
}

bool VarEstimate::all_ok() const {
  for (const auto& d : diagnostics) {
    if (!d.ok) return false;
  }
  return true;
}

double VarEstimate::max_kkt_residual() const {
  double worst = 0.0;
  for (const auto& d : diagnostics) worst = std::max(worst, d.kkt_residual);
  return worst;
}

double VarEstimate::max_feasibility_gap() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& d : diagnostics) worst = std::max(worst, d.feasibility_gap);
  return worst;
}

std::vector<VarEstimate> lasso_var_path(const Matrix& x, double nu,
                                        const std::vector<double>& lambdas) {
  const Eigen::Index n = x.rows() - 1;
  if (n < 2) throw InvalidInput("lasso_var_path: need n >= 2");
  const Eigen::Index p = x.cols();
  const Matrix xt = truncate(x, nu).X_tilde;
  const auto z = xt.topRows(n);
  const auto resp = xt.bottomRows(n);
  const double inv_n = 2.0 / static_cast<double>(n);
  const Matrix gram = inv_n * (z.transpose() * z);
  const Matrix lin = inv_n * (z.transpose() * resp);  // column j belongs to row j

  std::vector<double> order(lambdas);
  std::sort(order.begin(), order.end(), std::greater<>());

  std::vector<VarEstimate> out(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    out[k].A_hat.resize(p, p);
    out[k].method = std::isinf(nu) ? "lasso_plain" : "lasso";
    out[k].nu = nu;
    out[k].lambda = order[k];
    out[k].diagnostics.resize(static_cast<std::size_t>(p));
  }

  for (Eigen::Index j = 0; j < p; ++j) {
    Vector warm = Vector::Zero(p);
    for (std::size_t k = 0; k < order.size(); ++k) {
      LassoRowResult row = lasso_cd(gram, lin.col(j), order[k], &warm);
      warm = row.b;
      out[k].A_hat.row(j) = row.b.transpose();
      auto& diag = out[k].diagnostics[static_cast<std::size_t>(j)];
      diag.ok = row.converged;
      diag.kkt_residual = row.kkt_residual;
      diag.iterations = row.sweeps;
    }
  }
  return out;
}

VarEstimate robust_lasso_var(const Matrix& x, double nu, double lambda) {
  return lasso_var_path(x, nu, {lambda}).front();
}

VarEstimate plain_lasso_var(const Matrix& x, double lambda) {
  return robust_lasso_var(x, std::numeric_limits<double>::infinity(), lambda);
}

Vector dantzig_column(const Matrix& sigma0, const Vector& c, double lambda,
                      DantzigDiag* diag) {
  require_square(sigma0, "dantzig_column");
  require_finite(sigma0, "dantzig_column");
  require_finite(c, "dantzig_column");
  if (sigma0.rows() != c.size()) throw ShapeError("dantzig_column: size mismatch");
  if (lambda < 0.0) throw InvalidInput("dantzig_column: lambda must be >= 0");
  const Eigen::Index p = c.size();

  if (c.lpNorm<Eigen::Infinity>() <= lambda) {
    if (diag) *diag = {c.lpNorm<Eigen::Infinity>() - lambda, 0.0, 0};
    return Vector::Zero(p);
  }

  // Dual of  min 1'(u+v), S(u-v) in [c - lambda, c + lambda], u, v >= 0:
  //   max  -(c + lambda)'y1 + (c - lambda)'y2
  //   s.t. -S'(y1 - y2) <= 1,  S'(y1 - y2) <= 1,  y >= 0.
  // Its shadow prices are exactly (u, v).
  Matrix d(2 * p, 2 * p);
  const Matrix st = sigma0.transpose();
  d.topLeftCorner(p, p) = -st;
  d.topRightCorner(p, p) = st;
  d.bottomLeftCorner(p, p) = st;
  d.bottomRightCorner(p, p) = -st;
  const Vector e = Vector::Ones(2 * p);
  Vector g(2 * p);
  g.head(p) = -c.array() - lambda;
  g.tail(p) = c.array() - lambda;

  const SimplexResult res = simplex_max(d, e, g);
  if (res.unbounded) {
    const Vector b_ls = sigma0.colPivHouseholderQr().solve(c);
    const double violation =
        std::max(0.0, (sigma0 * b_ls - c).lpNorm<Eigen::Infinity>() - lambda);
    throw InfeasibleError("dantzig_column: program infeasible", violation);
  }

  const Vector u = res.row_duals.head(p);
  const Vector v = res.row_duals.tail(p);
  Vector b = u - v;
  if (diag) {
    diag->feasibility_gap = (sigma0 * b - c).lpNorm<Eigen::Infinity>() - lambda;
    diag->duality_gap = std::abs((u + v).sum() - res.objective) /
                        std::max(1.0, std::abs(res.objective));
    diag->iterations = res.iterations;
  }
  return b;
}

std::vector<VarEstimate> dantzig_var_path(const Matrix& x, double nu,
                                          const std::vector<double>& lambdas) {
  const Eigen::Index n = x.rows() - 1;
  if (n < 2) throw InvalidInput("dantzig_var_path: need n >= 2");
  const Eigen::Index p = x.cols();
  const Matrix sigma0 = autocov_robust(x, nu, 0);
  const Matrix sigma1 = autocov_robust(x, nu, 1);

  std::vector<double> order(lambdas);
  std::sort(order.begin(), order.end(), std::greater<>());

  std::vector<VarEstimate> out(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto& est = out[k];
    est.A_hat = Matrix::Zero(p, p);
    est.method = std::isinf(nu) ? "dantzig_plain" : "dantzig";
    est.nu = nu;
    est.lambda = order[k];
    est.diagnostics.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
      auto& diag = est.diagnostics[static_cast<std::size_t>(j)];
      try {
        DantzigDiag dd;
        est.A_hat.col(j) = dantzig_column(sigma0, sigma1.col(j), order[k], &dd);
        diag.ok = dd.feasibility_gap <= 1e-8;
        diag.feasibility_gap = dd.feasibility_gap;
        diag.duality_gap = dd.duality_gap;
        diag.iterations = dd.iterations;
      } catch (const InfeasibleError& err) {
        diag.ok = false;
        diag.feasibility_gap = err.violation;
      }
    }
  }
  return out;
}

VarEstimate robust_dantzig_var(const Matrix& x, double nu, double lambda) {
  VarEstimate est = dantzig_var_path(x, nu, {lambda}).front();
  for (std::size_t j = 0; j < est.diagnostics.size(); ++j) {
    if (!est.diagnostics[j].ok) {
      throw InfeasibleError(
          "robust_dantzig_var: column " + std::to_string(j) + " infeasible",
          est.diagnostics[j].feasibility_gap);
    }
  }
  return est;
}

VarEstimate plain_dantzig_var(const Matrix& x, double lambda) {
  return robust_dantzig_var(x, std::numeric_limits<double>::infinity(), lambda);
}

NormSet estimation_errors(const Matrix& a_hat, const Matrix& a) {
  if (a_hat.rows() != a.rows() || a_hat.cols() != a.cols()) {
    throw ShapeError("estimation_errors: shape mismatch");
  }
  return matrix_norms(a_hat - a);
}

namespace {

double rate_exponent_term(double n, double p, double q) {
  if (!(q > 2.0)) throw InvalidInput("rate evaluator: q must be > 2");
  if (!(n > 0.0) || !(p > 1.0)) throw InvalidInput("rate evaluator: bad n or p");
  const double e = 0.5 - 1.0 / (2.0 * q - 2.0);
  return std::pow(std::log(p) / n, e);
}

}  // namespace

double lasso_rate_linf(double c, double mu_q, double gamma, double tau,
                       double a_linf, double s, double n, double p, double q) {
  return c * mu_q * gamma * tau * (a_linf + 1.0) * s * rate_exponent_term(n, p, q);
}

double lasso_rate_frobenius(double c, double mu_q, double gamma, double tau,
                            double a_linf, double total_support, double n,
                            double p, double q) {
  return c * mu_q * gamma * tau * (a_linf + 1.0) * std::sqrt(total_support) *
         rate_exponent_term(n, p, q);
}

double dantzig_rate_max(double c, double mu_q, double gamma, double tau,
                        double sigma0_inv_l1, double a_l1, double n, double p,
                        double q) {
  return c * mu_q * gamma * tau * sigma0_inv_l1 * (a_l1 + 1.0) *
         rate_exponent_term(n, p, q);
}

double dantzig_rate_l1(double c, double mu_q, double gamma, double tau,
                       double sigma0_inv_l1, double a_l1, double s_star, double n,
                       double p, double q) {
  return dantzig_rate_max(c, mu_q, gamma, tau, sigma0_inv_l1, a_l1, n, p, q) *
         s_star;
}

}  // namespace tsr
