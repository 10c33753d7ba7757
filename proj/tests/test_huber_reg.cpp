#include <doctest.h>

#include "oracles.hpp"
#include "tsrobust/huber.hpp"
#include "tsrobust/huber_reg.hpp"
#include "tsrobust/rng.hpp"

using namespace tsr;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("weight function values") {
  const WeightSpec spec = WeightSpec::identity(5.0);
  Vector x = Vector::Zero(4);
  CHECK(weight(x, spec) == 1.0);
  x[0] = 10.0;
  CHECK(weight(x, spec) == 0.5);
  x[0] = 2.0;
  CHECK(weight(x, spec) == 1.0);
  CHECK(weight(x, WeightSpec::off()) == 1.0);
}

TEST_CASE("weight clamp |w(x) x|_2 <= b0") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_matrix(5, 5, rng);
    const Matrix spd = m.transpose() * m + 0.1 * Matrix::Identity(5, 5);
    const double b = 0.5 + 5.0 * rng.uniform();
    const WeightSpec spec = WeightSpec::with_matrix(spd, b);
    for (int i = 0; i < 100; ++i) {
      Vector x(5);
      for (int j = 0; j < 5; ++j) x[j] = 20.0 * rng.normal();
      CHECK((weight(x, spec) * x).norm() <= spec.b0() + 1e-12);
    }
  }
  CHECK_THROWS_AS(WeightSpec::with_matrix(Matrix::Zero(3, 3), 1.0), InvalidInput);
}

TEST_CASE("full shrinkage at large lambda") {
  Rng rng(12);
  const Matrix x = random_matrix(30, 6, rng);
  Vector y = x * Vector::Ones(6);
  for (int i = 0; i < 30; ++i) y[i] += 0.1 * rng.normal();
  HuberConfig cfg;
  cfg.nu = 10.0;
  cfg.lambda = 1e6;
  const FitResult fit = huber_reg_fit(x, y, cfg);
  CHECK(fit.converged);
  CHECK(fit.beta_hat.cwiseAbs().maxCoeff() == 0.0);
  CHECK(fit.active_set.empty());
}

TEST_CASE("noiseless unpenalized fit reduces to least squares") {
  Rng rng(13);
  const Matrix x = random_matrix(50, 5, rng);
  Vector beta_star(5);
  beta_star << 1.0, -2.0, 0.0, 0.5, 3.0;
  const Vector y = x * beta_star;
  HuberConfig cfg;
  cfg.nu = 1e4;
  cfg.lambda = 0.0;
  cfg.tol = 1e-10;
  const FitResult fit = huber_reg_fit(x, y, cfg);
  CHECK((fit.beta_hat - beta_star).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("objective trace is non-increasing") {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = random_matrix(40, 8, rng);
    Vector y = x * Vector::Ones(8);
    for (int i = 0; i < 40; ++i) y[i] += rng.student_t_standardized(5.0);
    HuberConfig cfg;
    cfg.nu = 1.0 + rng.uniform();
    cfg.lambda = 0.05 * rng.uniform();
    cfg.weight = WeightSpec::identity(4.0);
    const FitResult fit = huber_reg_fit(x, y, cfg);
    for (std::size_t i = 1; i < fit.objective_trace.size(); ++i) {
      CHECK(fit.objective_trace[i] <= fit.objective_trace[i - 1]);
    }
  }
}

TEST_CASE("KKT residual at convergence") {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix x = random_matrix(60, 6, rng);
    Vector y = x.leftCols(3) * Vector::Ones(3);
    for (int i = 0; i < 60; ++i) y[i] += 0.5 * rng.normal();
    HuberConfig cfg;
    cfg.nu = 2.0;
    cfg.lambda = 0.05;
    cfg.tol = 1e-10;
    const FitResult fit = huber_reg_fit(x, y, cfg);
    REQUIRE(fit.converged);
    CHECK(fit.kkt_residual <= 10.0 * cfg.tol);
  }
}

TEST_CASE("matches a two-dimensional objective grid") {
  Rng rng(16);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_matrix(25, 2, rng);
    Vector y(25);
    for (int i = 0; i < 25; ++i) {
      y[i] = 1.2 * x(i, 0) - 0.4 * x(i, 1) + 0.5 * rng.student_t_standardized(5.0);
    }
    HuberConfig cfg;
    cfg.nu = 0.8 + rng.uniform();
    cfg.lambda = 0.02 + 0.1 * rng.uniform();
    cfg.weight = WeightSpec::identity(3.0);
    cfg.tol = 1e-11;
    const FitResult fit = huber_reg_fit(x, y, cfg);
    REQUIRE(fit.converged);

    const auto objective = [&](const oracle::Vector& beta) {
      return huber_reg_objective(x, y, beta, cfg);
    };
    oracle::Vector lo = oracle::Vector::Constant(2, -3.0);
    oracle::Vector hi = oracle::Vector::Constant(2, 3.0);
    const oracle::Vector grid_best = oracle::grid_minimize(objective, lo, hi, 41, 7);
    CHECK((fit.beta_hat - grid_best).lpNorm<Eigen::Infinity>() < 1e-3);
  }
}

TEST_CASE("scaling covariance of the unweighted objective") {
  Rng rng(17);
  const Matrix x = random_matrix(40, 4, rng);
  Vector y(40);
  for (int i = 0; i < 40; ++i) y[i] = x(i, 0) - x(i, 2) + 0.3 * rng.normal();
  const double c = 3.7;
  HuberConfig cfg;
  cfg.nu = 1.1;
  cfg.lambda = 0.04;
  cfg.tol = 1e-12;
  const FitResult base = huber_reg_fit(x, y, cfg);
  HuberConfig scaled = cfg;
  scaled.nu = c * cfg.nu;
  scaled.lambda = c * c * cfg.lambda;
  const FitResult rescaled = huber_reg_fit(c * x, c * y, scaled);
  CHECK((base.beta_hat - rescaled.beta_hat).lpNorm<Eigen::Infinity>() < 1e-8);
}

TEST_CASE("tuner selection rules") {
  Rng rng(18);
  const Matrix x = random_matrix(40, 4, rng);
  Vector y(40);
  for (int i = 0; i < 40; ++i) y[i] = 2.0 * x(i, 1) + 0.4 * rng.normal();
  const Matrix xh = random_matrix(40, 4, rng);
  Vector yh(40);
  for (int i = 0; i < 40; ++i) yh[i] = 2.0 * xh(i, 1) + 0.4 * rng.normal();

  const TuneResult single = huber_reg_tune(x, y, {1.5}, {0.01}, xh, yh);
  CHECK(single.nu == 1.5);
  CHECK(single.lambda == 0.01);

  const TuneResult duped =
      huber_reg_tune(x, y, {1.5, 1.5, 0.7}, {0.01, 0.01, 0.1}, xh, yh);
  const TuneResult dedup = huber_reg_tune(x, y, {0.7, 1.5}, {0.01, 0.1}, xh, yh);
  CHECK(duped.nu == dedup.nu);
  CHECK(duped.lambda == dedup.lambda);

  HuberConfig strangled;
  strangled.max_iter = 1;
  strangled.tol = 1e-16;
  CHECK_THROWS_AS(huber_reg_tune(x, y, {1.5}, {0.01}, xh, yh, strangled),
                  TuningFailedError);
}

TEST_CASE("default grids are sane") {
  Rng rng(19);
  const Matrix x = random_matrix(50, 8, rng);
  Vector y(50);
  for (int i = 0; i < 50; ++i) y[i] = x(i, 0) + rng.normal();
  const auto nus = default_nu_grid(x, y);
  CHECK(nus.size() == 5);
  CHECK(nus.front() > 0.0);
  CHECK(nus.back() == doctest::Approx(16.0 * nus.front()));
  const auto lambdas = default_lambda_grid(x, y, nus[2], WeightSpec::off());
  CHECK(lambdas.size() == 10);
  CHECK(lambdas.front() > lambdas.back());
  CHECK(lambdas.back() == doctest::Approx(1e-3 * lambdas.front()));

  // zero-shrinkage threshold: lambda at the grid top kills every coordinate
  HuberConfig cfg;
  cfg.nu = nus[2];
  cfg.lambda = lambdas.front() * (1.0 + 1e-9);
  const FitResult fit = huber_reg_fit(x, y, cfg);
  CHECK(fit.beta_hat.cwiseAbs().maxCoeff() == 0.0);
}
