#include "tsrobust/huber_reg.hpp"

#include <algorithm>
#include <cmath>

#include "tsrobust/errors.hpp"
#include "tsrobust/huber.hpp"

namespace tsr {

WeightSpec WeightSpec::identity(double b) {
  if (!(b > 0.0)) throw InvalidInput("WeightSpec: b must be > 0");
  WeightSpec spec;
  spec.b = b;
  spec.lambda_min_B = 1.0;
  return spec;
}

WeightSpec WeightSpec::with_matrix(Matrix B, double b) {
  if (!(b > 0.0)) throw InvalidInput("WeightSpec: b must be > 0");
  WeightSpec spec;
  spec.lambda_min_B = min_eigenvalue_spd(B);
  if (!(spec.lambda_min_B > 0.0)) {
    throw InvalidInput("WeightSpec: B must be positive definite");
  }
  spec.B = std::move(B);
  spec.b = b;
  return spec;
}

double weight(const Vector& x, const WeightSpec& spec) {
  if (!spec.active()) return 1.0;
  const double norm = spec.B.size() == 0 ? x.norm() : (spec.B * x).norm();
  if (norm == 0.0) return 1.0;
  return std::min(1.0, spec.b / norm);
}

namespace {

struct Problem {
  const Matrix& x;
  const Vector& y;
  Vector w;        // per-row weights
  double nu;
  double inv_n;

  double smooth(const Vector& beta) const {
    double s = 0.0;
    const Vector r = y - x * beta;
    for (Eigen::Index i = 0; i < r.size(); ++i) s += huber_loss(r[i] * w[i], nu);
    return s * inv_n;
  }

  Vector grad(const Vector& beta) const {
    const Vector r = y - x * beta;
    Vector scores(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      scores[i] = huber_score(r[i] * w[i], nu) * w[i];
    }
    return -inv_n * (x.transpose() * scores);
  }
};

Vector prox_step(const Vector& beta, const Vector& grad, double step, double lambda) {
  Vector z = beta - step * grad;
  const double t = step * lambda;
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = soft_threshold(z[j], t);
  return z;
}

double kkt_residual_at(const Vector& beta, const Vector& grad, double lambda) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    double viol;
    if (beta[j] != 0.0) {
      viol = std::abs(grad[j] + lambda * (beta[j] > 0.0 ? 1.0 : -1.0));
    } else {
      viol = std::max(0.0, std::abs(grad[j]) - lambda);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

}  // namespace

double huber_reg_objective(const Matrix& x, const Vector& y, const Vector& beta,
                           const HuberConfig& cfg) {
  Problem prob{x, y, Vector(), cfg.nu, 1.0 / static_cast<double>(x.rows())};
  prob.w.resize(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) prob.w[i] = weight(x.row(i).transpose(), cfg.weight);
  return prob.smooth(beta) + cfg.lambda * beta.lpNorm<1>();
}

FitResult huber_reg_fit(const Matrix& x, const Vector& y, const HuberConfig& cfg) {
  if (x.rows() != y.size()) throw ShapeError("huber_reg_fit: X/Y row mismatch");
  if (x.rows() < 2) throw InvalidInput("huber_reg_fit: need n >= 2");
  if (!(cfg.nu > 0.0)) throw InvalidInput("huber_reg_fit: nu must be > 0");
  if (cfg.lambda < 0.0) throw InvalidInput("huber_reg_fit: lambda must be >= 0");
  if (cfg.max_iter < 1 || !(cfg.tol > 0.0)) throw InvalidInput("huber_reg_fit: bad solver config");
  require_finite(x, "huber_reg_fit");
  require_finite(y, "huber_reg_fit");

  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  Problem prob{x, y, Vector(n), cfg.nu, 1.0 / static_cast<double>(n)};
  double lipschitz = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    prob.w[i] = weight(x.row(i).transpose(), cfg.weight);
    lipschitz += prob.w[i] * prob.w[i] * x.row(i).squaredNorm();
  }
  lipschitz *= prob.inv_n;  // Huber curvature is at most 1

  FitResult out;
  out.nu = cfg.nu;
  out.lambda = cfg.lambda;
  out.beta_hat = Vector::Zero(p);

  double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
  double smooth_val = prob.smooth(out.beta_hat);
  double objective = smooth_val + cfg.lambda * out.beta_hat.lpNorm<1>();
  out.objective_trace.push_back(objective);

  for (int it = 0; it < cfg.max_iter; ++it) {
    const Vector grad = prob.grad(out.beta_hat);
    Vector z;
    double smooth_z = 0.0;
    double objective_z = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      z = prox_step(out.beta_hat, grad, step, cfg.lambda);
      const Vector d = z - out.beta_hat;
      smooth_z = prob.smooth(z);
      objective_z = smooth_z + cfg.lambda * z.lpNorm<1>();
      const double quad = smooth_val + grad.dot(d) + d.squaredNorm() / (2.0 * step);
      if (smooth_z <= quad + 1e-15 * std::abs(quad) && objective_z <= objective) {
        accepted = true;
        break;
      }
      step *= cfg.backtrack_shrink;
    }
    ++out.iterations;
    if (!accepted) break;  // step underflow; current iterate is stationary

    const double change = (z - out.beta_hat).lpNorm<Eigen::Infinity>();
    out.beta_hat = z;
    smooth_val = smooth_z;
    objective = objective_z;
    out.objective_trace.push_back(objective);
    if (change < cfg.tol) {
      out.converged = true;
      break;
    }
  }

  const Vector grad = prob.grad(out.beta_hat);
  out.kkt_residual = kkt_residual_at(out.beta_hat, grad, cfg.lambda);
  for (Eigen::Index j = 0; j < p; ++j) {
    if (out.beta_hat[j] != 0.0) out.active_set.push_back(static_cast<int>(j));
  }
  return out;
}

TuneResult huber_reg_tune(const Matrix& x, const Vector& y,
                          std::vector<double> nu_grid,
                          std::vector<double> lambda_grid, const Matrix& x_holdout,
                          const Vector& y_holdout, const HuberConfig& base) {
  if (nu_grid.empty() || lambda_grid.empty()) {
    throw InvalidInput("huber_reg_tune: empty grids");
  }
  if (x_holdout.rows() != y_holdout.size() || x_holdout.cols() != x.cols()) {
    throw ShapeError("huber_reg_tune: holdout shape mismatch");
  }
  std::sort(nu_grid.begin(), nu_grid.end());
  nu_grid.erase(std::unique(nu_grid.begin(), nu_grid.end()), nu_grid.end());
  std::sort(lambda_grid.begin(), lambda_grid.end());
  lambda_grid.erase(std::unique(lambda_grid.begin(), lambda_grid.end()), lambda_grid.end());

  TuneResult best;
  double best_mse = std::numeric_limits<double>::infinity();
  const double inv_m = 1.0 / static_cast<double>(x_holdout.rows());
  for (double nu : nu_grid) {
    for (double lambda : lambda_grid) {
      HuberConfig cfg = base;
      cfg.nu = nu;
      cfg.lambda = lambda;
      FitResult fit = huber_reg_fit(x, y, cfg);
      ++best.fits_tried;
      if (!fit.converged) continue;
      ++best.fits_converged;
      const double mse = (y_holdout - x_holdout * fit.beta_hat).squaredNorm() * inv_m;
      if (mse < best_mse) {
        best_mse = mse;
        best.nu = nu;
        best.lambda = lambda;
        best.fit = std::move(fit);
        best.holdout_mse = mse;
      }
    }
  }
  if (best.fits_converged == 0) {
    throw TuningFailedError("huber_reg_tune: no (nu, lambda) fit converged");
  }
  return best;
}

std::vector<double> default_nu_grid(const Matrix& x, const Vector& y) {
  const double sigma = std::max(mad_scale(y), 1e-12);
  const double logp = std::max(std::log(static_cast<double>(x.cols())), 1.0);
  const double pilot = sigma * std::sqrt(static_cast<double>(x.rows()) / logp);
  return {0.25 * pilot, 0.5 * pilot, pilot, 2.0 * pilot, 4.0 * pilot};
}

std::vector<double> default_lambda_grid(const Matrix& x, const Vector& y, double nu,
                                        const WeightSpec& weight_spec) {
  const Eigen::Index n = x.rows();
  Vector scores(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double w = weight(x.row(i).transpose(), weight_spec);
    scores[i] = huber_score(y[i] * w, nu) * w;
  }
  const Vector g = x.transpose() * scores / static_cast<double>(n);
  double lambda_max = g.lpNorm<Eigen::Infinity>();
  if (!(lambda_max > 0.0)) lambda_max = 1.0;
  std::vector<double> grid(10);
  for (int j = 0; j < 10; ++j) grid[static_cast<std::size_t>(j)] = lambda_max * std::pow(10.0, -3.0 * j / 9.0);
  return grid;
}

}  // namespace tsr
