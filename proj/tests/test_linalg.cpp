#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "oracles.hpp"
#include "tsrobust/linalg.hpp"
#include "tsrobust/rng.hpp"

using namespace tsr;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * rng.normal();
  return m;
}

}  // namespace

TEST_CASE("operator norm on closed-form cases") {
  CHECK(operator_norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-9));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -3.0;
  CHECK(operator_norm(d) == doctest::Approx(3.0).epsilon(1e-9));

  Matrix shift(2, 2);
  shift << 0, 1, 0, 0;
  CHECK(operator_norm(shift) ==
        doctest::Approx(oracle::two_by_two(shift).sigma_max).epsilon(1e-9));

  Matrix bad(2, 2);
  bad << 1, 2, 3, std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(operator_norm(bad), InvalidInput);
}

TEST_CASE("operator norm matches SVD on random matrices") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_matrix(8 + trial % 5, 6 + trial % 7, rng);
    const double svd = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
    CHECK(operator_norm(m) == doctest::Approx(svd).epsilon(1e-9));
  }
}

TEST_CASE("spectral radius closed forms") {
  CHECK(spectral_radius(Matrix::Identity(4, 4)) == doctest::Approx(1.0));

  Matrix nilpotent = Matrix::Zero(4, 4);
  nilpotent(0, 1) = 2.0;
  nilpotent(1, 2) = -1.0;
  nilpotent(2, 3) = 0.5;
  CHECK(spectral_radius(nilpotent) == 0.0);

  Matrix a(2, 2);
  a << 0.5, 0.3, 0.1, 0.4;
  CHECK(spectral_radius(a) ==
        doctest::Approx(oracle::two_by_two(a).eig_max_abs).epsilon(1e-8));

  CHECK_THROWS_AS(spectral_radius(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("spectral radius of rotation-dominant spectra") {
  // scaled rotation: complex pair, power iteration cannot settle
  const double theta = 0.7;
  Matrix rot(2, 2);
  rot << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  rot *= 0.9;
  CHECK(spectral_radius(rot) == doctest::Approx(0.9).epsilon(1e-8));

  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_matrix(7, 7, rng, 0.5);
    const double truth = m.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(spectral_radius(m) == doctest::Approx(truth).epsilon(1e-7));
  }
}

TEST_CASE("matrix norms by hand") {
  Matrix a(2, 2);
  a << 1, -2, 3, 0;
  const NormSet norms = matrix_norms(a);
  CHECK(norms.l1_induced == 4.0);
  CHECK(norms.linf_induced == 3.0);
  CHECK(norms.frobenius == doctest::Approx(std::sqrt(14.0)));
  CHECK(norms.max_abs == 3.0);
  CHECK(norms.entry_l1 == 6.0);

  const NormSet zero = matrix_norms(Matrix::Zero(3, 4));
  CHECK(zero.l1_induced == 0.0);
  CHECK(zero.linf_induced == 0.0);
  CHECK(zero.frobenius == 0.0);
  CHECK(zero.max_abs == 0.0);
  CHECK(zero.entry_l1 == 0.0);

  const NormSet eye = matrix_norms(Matrix::Identity(5, 5));
  CHECK(eye.l1_induced == 1.0);
  CHECK(eye.linf_induced == 1.0);
  CHECK(eye.frobenius == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("norm ordering and radius ordering") {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix m = random_matrix(6, 6, rng);
    const NormSet norms = matrix_norms(m);
    const double op = operator_norm(m);
    CHECK(norms.max_abs <= op + 1e-9);
    CHECK(op <= norms.frobenius + 1e-9);
    CHECK(spectral_radius(m) <= op + 1e-9);
  }
}

TEST_CASE("min eigenvalue of symmetric matrices") {
  CHECK(min_eigenvalue_spd(Matrix::Identity(3, 3)) == doctest::Approx(1.0));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  CHECK(min_eigenvalue_spd(d) == doctest::Approx(4.0).epsilon(1e-8));

  Matrix a(2, 2);
  a << 2, 1, 1, 2;
  CHECK(min_eigenvalue_spd(a) ==
        doctest::Approx(oracle::two_by_two(a).eig_min).epsilon(1e-8));

  Matrix asym(2, 2);
  asym << 1, 0.5, 0.5 + 1e-6, 1;
  CHECK_THROWS_AS(min_eigenvalue_spd(asym), InvalidInput);

  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m = random_matrix(6, 6, rng);
    Matrix spd = m.transpose() * m + 0.05 * Matrix::Identity(6, 6);
    const double truth =
        Eigen::SelfAdjointEigenSolver<Matrix>(spd).eigenvalues().minCoeff();
    CHECK(min_eigenvalue_spd(spd) == doctest::Approx(truth).epsilon(1e-7));
  }
}

TEST_CASE("dependence profile on a symmetric half-rate design") {
  // symmetric with |A^k| = 0.5^k: tau = 1, constructive gamma = 1/rho0 = 2
  const Matrix a = 0.5 * Matrix::Identity(4, 4);
  const DependenceProfile profile = dependence_profile(a, 0.5, 12);
  CHECK(profile.tau == 1);
  CHECK(profile.gamma == doctest::Approx(2.0));
  for (int k = 0; k <= 12; ++k) {
    CHECK(profile.norms[static_cast<std::size_t>(k)] ==
          doctest::Approx(std::pow(0.5, k)).epsilon(1e-9));
  }
}

TEST_CASE("dependence profile of the zero matrix") {
  const DependenceProfile profile = dependence_profile(Matrix::Zero(3, 3), 0.5, 5);
  CHECK(profile.tau == 1);
  CHECK(profile.norms[0] == 1.0);
  for (std::size_t k = 1; k < profile.norms.size(); ++k) CHECK(profile.norms[k] == 0.0);
}

TEST_CASE("dependence profile errors") {
  CHECK_THROWS_AS(dependence_profile(Matrix::Identity(2, 2), 0.5, 10),
                  NonStationaryError);
  CHECK_THROWS_AS(dependence_profile(0.9 * Matrix::Identity(2, 2), 0.5, 3),
                  HorizonExceededError);
  CHECK_THROWS_AS(dependence_profile(0.5 * Matrix::Identity(2, 2), 1.5, 3),
                  InvalidInput);
}

TEST_CASE("profile invariants: domination and submultiplicativity") {
  Rng rng(91);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix m = random_matrix(8, 8, rng, 0.4);
    m /= 1.2 * std::max(spectral_radius(m), 0.1);
    const int kmax = 20;
    const DependenceProfile profile = dependence_profile(m, 0.5, kmax);
    for (int k = 0; k <= kmax; ++k) {
      CHECK(profile.norms[static_cast<std::size_t>(k)] <= profile.envelope(k) + 1e-8);
    }
    for (int k = 0; k <= kmax; ++k) {
      for (int j = 0; k + j <= kmax; ++j) {
        CHECK(profile.norms[static_cast<std::size_t>(k + j)] <=
              profile.norms[static_cast<std::size_t>(k)] *
                      profile.norms[static_cast<std::size_t>(j)] +
                  1e-8);
      }
    }
  }
}
