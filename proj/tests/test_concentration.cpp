#include <doctest.h>

#include "oracles.hpp"
#include "tsrobust/concentration.hpp"

using namespace tsr;

TEST_CASE("explicit constants at rho0 = 0.5") {
  BoundParams params;
  params.rho0 = 0.5;
  // frozen from an independent evaluation of the closed forms
  CHECK(params.c1() == doctest::Approx(2266.19).epsilon(1e-3));
  CHECK(params.c2() == doctest::Approx(31.3733).epsilon(1e-3));
}

TEST_CASE("bernstein bound basics") {
  BoundParams params;
  params.rho0 = 0.5;
  params.sigma = 1.0;
  params.tau = 1.0;
  params.gamma = 2.0;
  params.m_bound = 2.0;
  params.n = 200.0;
  CHECK(bernstein_bound(0.0, params) == 2.0);
  CHECK(bernstein_bound_clipped(0.0, params) == 1.0);
  double prev = bernstein_bound(1e-9, params);
  for (double x : {1.0, 5.0, 25.0, 125.0, 625.0}) {
    const double cur = bernstein_bound(x, params);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(bernstein_bound(-1.0, params), InvalidInput);
}

TEST_CASE("sub-gaussian and sub-exponential split") {
  BoundParams params;
  params.rho0 = 0.4;
  params.sigma = 1.3;
  params.tau = 2.0;
  params.gamma = 1.7;
  params.m_bound = 2.5;
  params.n = 500.0;
  for (double x : {0.5, 3.0, 40.0, 900.0}) {
    const double joint = bernstein_bound(x, params);
    const double gauss_only =
        2.0 * std::exp(-x * x / (params.c1() * params.n * params.sigma * params.sigma *
                                 params.tau * params.tau * params.gamma * params.gamma));
    const double exp_only = 2.0 * std::exp(-x / (params.c2() * params.tau * params.m_bound));
    CHECK(joint >= gauss_only);
    CHECK(joint >= exp_only);
  }
}

TEST_CASE("exponential-moment variant congruence") {
  BoundParams params;
  params.rho0 = 0.5;
  params.sigma = 1.4;
  params.tau = 3.0;
  params.gamma = 2.2;
  params.m_bound = 1.8;
  params.n = 300.0;
  for (double x : {0.0, 1.0, 10.0, 100.0}) {
    const double direct = bernstein_bound(x, params);
    const double via_expmoment = bernstein_bound_expmoment(
        x, params.n, params.sigma, params.gamma, params.tau, params.c1(),
        params.c2() * params.m_bound / params.gamma);
    CHECK(via_expmoment == doctest::Approx(direct).epsilon(1e-12));
  }
  CHECK(bernstein_bound_expmoment(0.0, 100.0, 1.0, 1.0, 1.0, 10.0, 5.0) == 2.0);
}

TEST_CASE("clipped linear transform") {
  Vector a1(1);
  a1 << 1.0;
  const LipschitzTransform g1 = clipped_linear_transform(a1, 2.0);
  Vector x1(1);
  x1 << 3.0;
  CHECK(g1(x1) == 2.0);

  Vector a(4);
  a << 0.25, 0.25, 0.25, 0.25;
  const LipschitzTransform g = clipped_linear_transform(a, 1.5);
  CHECK(g(Vector::Zero(4)) == 0.0);

  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Vector u(4), v(4);
    for (int j = 0; j < 4; ++j) {
      u[j] = 4.0 * rng.normal();
      v[j] = 4.0 * rng.normal();
    }
    double lip = 0.0;
    for (int j = 0; j < 4; ++j) lip += g.weights[j] * std::abs(u[j] - v[j]);
    CHECK(std::abs(g(u) - g(v)) <= lip + 1e-12);
    CHECK(std::abs(g(u)) <= 1.5 + 1e-12);
  }

  Vector bad(2);
  bad << 0.6, 0.6;
  CHECK_THROWS_AS(clipped_linear_transform(bad, 1.0), InvalidInput);
}

TEST_CASE("empirical tail of the zero transform vanishes") {
  LipschitzTransform zero;
  zero.coefficients = Vector::Zero(1);
  zero.weights = Vector::Zero(1);
  zero.clip = 1.0;
  Rng rng(6);
  const TailTable table = empirical_tail(ProcessModel::iid(1), zero, 50,
                                         {0.5, 1.0, 2.0}, 1000, rng);
  for (const auto& row : table.rows) {
    CHECK(row.empirical == 0.0);
    CHECK(row.bound > 0.0);
  }
}

TEST_CASE("iid clipped gaussian: classical reference curve dominates") {
  Rng rng(7);
  Vector a(1);
  a << 1.0;
  const LipschitzTransform g = clipped_linear_transform(a, 2.0);
  const int n = 100;
  BoundParams pre;
  pre.n = n;
  pre.gamma = 2.0;
  pre.tau = 1.0;
  const TailTable table = empirical_tail(ProcessModel::iid(1), g, n,
                                         default_x_grid(pre), 4000, rng);
  double prev = 1.0;
  for (const auto& row : table.rows) {
    CHECK(row.empirical <= prev + 1e-12);  // empirical survival function
    prev = row.empirical;
    const double classical = classical_bernstein(row.x, n, 1.0, 2.0);
    CHECK(row.empirical <= classical + 3.0 * row.stderr_ + 1e-12);
    CHECK(row.empirical <= row.bound + 3.0 * row.stderr_ + 1e-12);
  }
}

TEST_CASE("ar(1) tail dominated by the dependent-case bound") {
  Rng rng(8);
  Vector a(1);
  a << 1.0;
  const LipschitzTransform g = clipped_linear_transform(a, 2.0);
  const int n = 150;
  const ProcessModel model = ProcessModel::ar1(0.5);
  BoundParams pre;
  pre.n = n;
  pre.gamma = 2.0;
  pre.tau = 1.0;
  const TailTable table =
      empirical_tail(model, g, n, default_x_grid(pre), 2000, rng);
  CHECK(table.params.tau == 1);          // |A^1| = 0.5 <= rho0
  CHECK(table.params.gamma == doctest::Approx(2.0));
  for (const auto& row : table.rows) {
    CHECK(row.empirical <= row.bound + 3.0 * row.stderr_ + 1e-12);
  }
}

TEST_CASE("empirical tail rejects unstable models") {
  Rng rng(9);
  Vector a(1);
  a << 1.0;
  const LipschitzTransform g = clipped_linear_transform(a, 1.0);
  CHECK_THROWS_AS(
      empirical_tail(ProcessModel::ar1(1.05), g, 50, {1.0}, 1000, rng),
      NonStationaryError);
}

TEST_CASE("mean rate check: slope, scaling and determinism") {
  Rng rng(10);
  const MeanRateTable table = mean_bound_check({200, 800, 3200}, 20, 40, rng);
  CHECK(table.slope >= -0.6);
  CHECK(table.slope <= -0.4);

  Rng rng2(10);
  const MeanRateTable again = mean_bound_check({200, 800, 3200}, 20, 40, rng2);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(table.rows[i].mean_error == again.rows[i].mean_error);
  }

  Rng rng3(10);
  const MeanRateTable doubled = mean_bound_check({200, 800, 3200}, 20, 40, rng3, 2.0);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(doubled.rows[i].bound == doctest::Approx(2.0 * table.rows[i].bound));
  }
}
