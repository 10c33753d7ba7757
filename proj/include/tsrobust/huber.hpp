#pragma once

//
// Huber score/loss, the soft-threshold operator, and coordinatewise Huber
// M-estimation of a mean vector with the l-infinity error bound evaluator.
//

#include <vector>

#include "tsrobust/linalg.hpp"

namespace tsr {

// phi_nu(x) = (x ^ nu) v (-nu): clip to [-nu, nu].
double huber_score(double x, double nu);

// x^2/2 inside [-nu, nu], nu|x| - nu^2/2 outside; the antiderivative of the score.
double huber_loss(double x, double nu);

// sign(z) * max(|z| - t, 0)
double soft_threshold(double z, double t);

// 1.4826 * median(|x - median(x)|); Gaussian-consistent robust scale.
double mad_scale(const Vector& x);
double median(std::vector<double> x);

// Root of a -> sum_i phi_nu(x_i - a), found by bisection on
// [min x - nu, max x + nu]; a flat zero interval returns its midpoint.
// iterations, when given, receives the bisection step count.
double huber_mean_scalar(const Vector& samples, double nu, int* iterations = nullptr);

struct HuberMeanResult {
  Vector mu_hat;
  double nu = 0.0;              // robustification parameter actually used
  std::vector<int> iterations;  // bisection steps per coordinate
};

// Coordinatewise Huber mean of the rows-by-observations matrix X.
// nu <= 0 requests the automatic choice c_hat * sigma_hat * sqrt(n / log p)
// with sigma_hat the median across coordinates of the per-column MAD scale;
// log p is floored at 1 so p = 1 and p = 2 stay usable.
HuberMeanResult huber_mean_vector(const Matrix& x, double nu, double c_hat = 1.0);

// C * (gamma + mu2) * tau * sqrt(log p / n)
double mean_error_bound(double n, double p, double gamma, double mu2, double tau,
                        double c);

}  // namespace tsr
