#include "tsrobust/concentration.hpp"

#include <algorithm>
#include <cmath>

#include "tsrobust/errors.hpp"
#include "tsrobust/huber.hpp"

namespace tsr {

double BoundParams::c1() const {
  const double lg = std::log(1.0 / rho0);
  return 16.0 * std::exp(2.0) /
         (std::sqrt(2.0 * M_PI) * std::pow(rho0, 4) * lg * lg * lg);
}

double BoundParams::c2() const { return 8.0 * std::exp(1.0) / std::log(1.0 / rho0); }

double bernstein_bound(double x, const BoundParams& params) {
  if (x < 0.0) throw InvalidInput("bernstein_bound: x must be >= 0");
  if (!(params.rho0 > 0.0 && params.rho0 < 1.0)) {
    throw InvalidInput("bernstein_bound: rho0 must lie in (0,1)");
  }
  const double denom = params.c1() * params.n * params.sigma * params.sigma *
                           params.tau * params.tau * params.gamma * params.gamma +
                       params.c2() * params.tau * params.m_bound * x;
  if (denom <= 0.0) return x == 0.0 ? 2.0 : 0.0;
  return 2.0 * std::exp(-x * x / denom);
}

double bernstein_bound_clipped(double x, const BoundParams& params) {
  return std::min(1.0, bernstein_bound(x, params));
}

double bernstein_bound_expmoment(double x, double n, double theta, double gamma,
                                 double tau, double c3, double c4) {
  if (x < 0.0) throw InvalidInput("bernstein_bound_expmoment: x must be >= 0");
  const double denom =
      c3 * n * theta * theta * tau * tau * gamma * gamma + c4 * gamma * tau * x;
  if (denom <= 0.0) return x == 0.0 ? 2.0 : 0.0;
  return 2.0 * std::exp(-x * x / denom);
}

double classical_bernstein(double x, double n, double sigma2, double m_bound) {
  if (x < 0.0) throw InvalidInput("classical_bernstein: x must be >= 0");
  const double denom = 2.0 * n * sigma2 + 2.0 * m_bound * x / 3.0;
  if (denom <= 0.0) return x == 0.0 ? 1.0 : 0.0;
  return std::exp(-x * x / denom);
}

double LipschitzTransform::operator()(const Vector& x) const {
  if (x.size() != coefficients.size()) {
    throw ShapeError("LipschitzTransform: dimension mismatch");
  }
  double s = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    s += coefficients[j] * std::clamp(x[j], -clip, clip);
  }
  return s;
}

LipschitzTransform clipped_linear_transform(const Vector& a, double m_bound) {
  require_finite(a, "clipped_linear_transform");
  if (!(m_bound > 0.0)) throw InvalidInput("clipped_linear_transform: M must be > 0");
  if (std::abs(a.lpNorm<1>() - 1.0) > 1e-12) {
    throw InvalidInput("clipped_linear_transform: weights must satisfy |a|_1 = 1");
  }
  LipschitzTransform g;
  g.coefficients = a;
  g.weights = a.cwiseAbs();
  g.clip = m_bound;
  return g;
}

ProcessModel ProcessModel::iid(int p, InnovationDist innov) {
  if (p < 1) throw InvalidInput("ProcessModel::iid: p must be >= 1");
  return {Matrix::Zero(p, p), innov};
}

ProcessModel ProcessModel::ar1(double coefficient, InnovationDist innov) {
  Matrix a(1, 1);
  a(0, 0) = coefficient;
  return {a, innov};
}

std::vector<double> default_x_grid(const BoundParams& params) {
  const double unit =
      std::sqrt(params.n * params.sigma * params.sigma) * params.gamma * params.tau;
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(0.5 * k * unit);
  return grid;
}

TailTable empirical_tail(const ProcessModel& model, const LipschitzTransform& g,
                         int n, const std::vector<double>& x_grid, int reps,
                         Rng& rng, double rho0) {
  if (n < 1) throw InvalidInput("empirical_tail: n must be >= 1");
  if (reps < 1000) throw InvalidInput("empirical_tail: need reps >= 1000");
  if (x_grid.empty()) throw InvalidInput("empirical_tail: empty grid");
  const int p = static_cast<int>(model.A.rows());
  if (g.coefficients.size() != p) throw ShapeError("empirical_tail: transform/model mismatch");

  const DependenceProfile profile = dependence_profile(model.A, rho0, 400);

  TailTable out;
  out.params.rho0 = rho0;
  out.params.tau = profile.tau;
  out.params.gamma = profile.gamma;
  out.params.sigma = model.innov.kind == InnovationDist::Kind::Gaussian
                         ? model.innov.sigma
                         : 1.0;
  out.params.m_bound = g.clip;
  out.params.n = n;

  const int burn = default_burn_in(profile.tau);

  // One long stationary pre-run estimates E G; batch means absorb the serial
  // correlation when estimating its standard error.
  {
    const long prerun = std::max<long>(100000L * profile.tau, 100000L);
    const int batches = 100;
    const long batch_len = prerun / batches;
    Vector x = Vector::Zero(p);
    for (int t = 0; t < burn; ++t) {
      Vector e(p);
      for (int j = 0; j < p; ++j) e[j] = model.innov.draw(rng);
      x = model.A * x + e;
    }
    std::vector<double> batch_mean(batches, 0.0);
    double total = 0.0;
    for (int bi = 0; bi < batches; ++bi) {
      double acc = 0.0;
      for (long t = 0; t < batch_len; ++t) {
        Vector e(p);
        for (int j = 0; j < p; ++j) e[j] = model.innov.draw(rng);
        x = model.A * x + e;
        acc += g(x);
      }
      batch_mean[static_cast<std::size_t>(bi)] = acc / static_cast<double>(batch_len);
      total += acc;
    }
    out.eg_hat = total / static_cast<double>(batch_len * batches);
    double ss = 0.0;
    for (double bm : batch_mean) ss += (bm - out.eg_hat) * (bm - out.eg_hat);
    out.prerun_se = std::sqrt(ss / (batches - 1.0) / batches);
  }

  // Exceedance counts per grid point, plus counts at x -+ n*se so the prerun
  // uncertainty can be folded into the reported stderr.
  std::vector<double> grid(x_grid);
  std::sort(grid.begin(), grid.end());
  const double shift = static_cast<double>(n) * out.prerun_se;
  std::vector<long> hits(grid.size(), 0), hits_lo(grid.size(), 0), hits_hi(grid.size(), 0);
  for (int r = 0; r < reps; ++r) {
    Vector x = Vector::Zero(p);
    for (int t = 0; t < burn; ++t) {
      Vector e(p);
      for (int j = 0; j < p; ++j) e[j] = model.innov.draw(rng);
      x = model.A * x + e;
    }
    double s = 0.0;
    for (int t = 0; t < n; ++t) {
      Vector e(p);
      for (int j = 0; j < p; ++j) e[j] = model.innov.draw(rng);
      x = model.A * x + e;
      s += g(x) - out.eg_hat;
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      if (s >= grid[k]) ++hits[k];
      if (s >= grid[k] - shift) ++hits_hi[k];
      if (s >= grid[k] + shift) ++hits_lo[k];
    }
  }

  out.rows.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    TailRow& row = out.rows[k];
    row.x = grid[k];
    row.empirical = static_cast<double>(hits[k]) / reps;
    row.bound = bernstein_bound_clipped(grid[k], out.params);
    const double binom = std::sqrt(row.empirical * (1.0 - row.empirical) / reps);
    const double prerun_term =
        0.5 * static_cast<double>(hits_hi[k] - hits_lo[k]) / reps;
    row.stderr_ = binom + prerun_term;
  }
  return out;
}

MeanRateTable mean_bound_check(const std::vector<int>& n_list, int p, int reps,
                               Rng& rng, double bound_c) {
  if (n_list.size() < 2) throw InvalidInput("mean_bound_check: need >= 2 sizes");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1]) {
      throw InvalidInput("mean_bound_check: n_list must be increasing");
    }
  }
  if (p < 1 || reps < 1) throw InvalidInput("mean_bound_check: bad sizes");

  const InnovationDist t5 = InnovationDist::student_t(5.0);
  MeanRateTable out;
  out.rows.reserve(n_list.size());
  for (int n : n_list) {
    double acc = 0.0;
    for (int r = 0; r < reps; ++r) {
      Matrix x(n, p);
      for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = t5.draw(rng);
      const HuberMeanResult est = huber_mean_vector(x, -1.0);
      acc += est.mu_hat.lpNorm<Eigen::Infinity>();
    }
    MeanRateRow row;
    row.n = n;
    row.mean_error = acc / reps;
    // iid case: the constructive profile of A = 0 gives tau = 1, gamma = 2.
    row.bound = mean_error_bound(n, p, 2.0, 1.0, 1.0, bound_c);
    out.rows.push_back(row);
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double m = static_cast<double>(out.rows.size());
  for (const auto& row : out.rows) {
    const double lx = std::log(static_cast<double>(row.n));
    const double ly = std::log(row.mean_error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace tsr
