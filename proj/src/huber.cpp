#include "tsrobust/huber.hpp"

#include <algorithm>
#include <cmath>

#include "tsrobust/errors.hpp"

namespace tsr {

double huber_score(double x, double nu) {
  if (!(nu > 0.0)) throw InvalidInput("huber_score: nu must be > 0");
  return std::clamp(x, -nu, nu);
}

double huber_loss(double x, double nu) {
  if (!(nu > 0.0)) throw InvalidInput("huber_loss: nu must be > 0");
  const double ax = std::abs(x);
  return ax <= nu ? 0.5 * x * x : nu * ax - 0.5 * nu * nu;
}

double soft_threshold(double z, double t) {
  if (t < 0.0) throw InvalidInput("soft_threshold: threshold must be >= 0");
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

double median(std::vector<double> x) {
  if (x.empty()) throw InvalidInput("median of empty sample");
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid), x.end());
  double hi = x[mid];
  if (x.size() % 2 == 1) return hi;
  std::nth_element(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(mid) - 1, x.end());
  return 0.5 * (x[mid - 1] + hi);
}

double mad_scale(const Vector& x) {
  std::vector<double> v(x.data(), x.data() + x.size());
  const double med = median(v);
  for (double& t : v) t = std::abs(t - med);
  return 1.4826 * median(std::move(v));
}

namespace {

double huber_score_sum(const Vector& samples, double a, double nu) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < samples.size(); ++i) {
    s += std::clamp(samples[i] - a, -nu, nu);
  }
  return s;
}

}  // namespace

double huber_mean_scalar(const Vector& samples, double nu, int* iterations) {
  if (!(nu > 0.0)) throw InvalidInput("huber_mean_scalar: nu must be > 0");
  if (samples.size() == 0) throw InvalidInput("huber_mean_scalar: empty sample");
  if (!samples.allFinite()) throw InvalidInput("huber_mean_scalar: non-finite sample");

  const double lo0 = samples.minCoeff();
  const double hi0 = samples.maxCoeff();
  if (iterations) *iterations = 0;
  if (lo0 == hi0) return lo0;

  // The score sum is non-increasing in a, positive at lo0 - nu and negative
  // at hi0 + nu.  Two bisections bracket the zero set; its midpoint is the
  // deterministic tie-break when clipping makes the zero an interval.
  const double tol = std::min(1e-10, 1e-10 * nu);
  int steps = 0;

  double lo = lo0 - nu, hi = hi0 + nu;
  for (int it = 0; it < 200 && hi - lo > tol; ++it, ++steps) {
    const double mid = 0.5 * (lo + hi);
    if (huber_score_sum(samples, mid, nu) <= 0.0) hi = mid; else lo = mid;
  }
  const double left_edge = hi;

  lo = lo0 - nu;
  hi = hi0 + nu;
  for (int it = 0; it < 200 && hi - lo > tol; ++it, ++steps) {
    const double mid = 0.5 * (lo + hi);
    if (huber_score_sum(samples, mid, nu) < 0.0) hi = mid; else lo = mid;
  }
  const double right_edge = lo;

  if (iterations) *iterations = steps;
  return 0.5 * (left_edge + right_edge);
}

HuberMeanResult huber_mean_vector(const Matrix& x, double nu, double c_hat) {
  const Eigen::Index n = x.rows();
  const Eigen::Index p = x.cols();
  if (n < 1 || p < 1) throw InvalidInput("huber_mean_vector: empty sample");

  double used_nu = nu;
  if (!(nu > 0.0)) {
    std::vector<double> scales(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) scales[static_cast<std::size_t>(j)] = mad_scale(x.col(j));
    double sigma_hat = median(std::move(scales));
    if (sigma_hat <= 0.0) sigma_hat = 1e-12;  // constant columns; any nu works
    const double logp = std::max(std::log(static_cast<double>(p)), 1.0);
    used_nu = c_hat * sigma_hat * std::sqrt(static_cast<double>(n) / logp);
  }

  HuberMeanResult out;
  out.nu = used_nu;
  out.mu_hat.resize(p);
  out.iterations.resize(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    int iters = 0;
    out.mu_hat[j] = huber_mean_scalar(x.col(j), used_nu, &iters);
    out.iterations[static_cast<std::size_t>(j)] = iters;
  }
  return out;
}

double mean_error_bound(double n, double p, double gamma, double mu2, double tau,
                        double c) {
  if (!(n > 0.0) || !(p > 0.0) || !(gamma > 0.0) || !(mu2 > 0.0) || !(tau > 0.0) ||
      !(c > 0.0)) {
    throw InvalidInput("mean_error_bound: all parameters must be positive");
  }
  return c * (gamma + mu2) * tau * std::sqrt(std::log(p) / n);
}

}  // namespace tsr
