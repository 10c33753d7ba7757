#pragma once

//
// Dense linear-algebra kernel shared by all modules: the five matrix norms,
// operator norm and spectral radius, smallest eigenvalue of symmetric
// matrices, and the (tau, gamma) dependence profile of a transition matrix.
// Everything is a pure free function over Eigen dense expressions.
//

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "tsrobust/errors.hpp"
#include "tsrobust/rng.hpp"

namespace tsr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* who) {
  if (!a.allFinite()) throw InvalidInput(std::string(who) + ": non-finite entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* who) {
  if (a.rows() != a.cols()) throw ShapeError(std::string(who) + ": matrix must be square");
}

struct NormSet {
  double l1_induced;    // max column absolute sum
  double linf_induced;  // max row absolute sum
  double frobenius;
  double max_abs;       // entrywise max
  double entry_l1;      // sum of |a_ij|
};

template <typename Derived>
NormSet matrix_norms(const Eigen::MatrixBase<Derived>& a) {
  require_finite(a, "matrix_norms");
  NormSet out;
  const auto abs = a.cwiseAbs();
  out.l1_induced = a.rows() > 0 && a.cols() > 0 ? abs.colwise().sum().maxCoeff() : 0.0;
  out.linf_induced = a.rows() > 0 && a.cols() > 0 ? abs.rowwise().sum().maxCoeff() : 0.0;
  out.frobenius = a.norm();
  out.max_abs = a.size() > 0 ? abs.maxCoeff() : 0.0;
  out.entry_l1 = abs.sum();
  return out;
}

namespace detail {

inline Vector deterministic_unit_vector(Eigen::Index n, std::uint64_t salt) {
  Rng rng(0x5d2f3c1a9e4b7086ULL + salt);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  const double nrm = v.norm();
  return nrm > 0 ? Vector(v / nrm) : Vector(Vector::Unit(n, 0));
}

// Largest eigenvalue of a symmetric matrix by power iteration.  For
// symmetric B the Rayleigh quotient error is bounded by the residual
// |Bv - theta v|, which is the convergence test used here.
inline double top_eigen_sym(const Matrix& b, double tol_rel = 1e-12,
                            int max_iter = 100000) {
  const Eigen::Index n = b.rows();
  if (n == 0) return 0.0;
  Vector v = deterministic_unit_vector(n, static_cast<std::uint64_t>(n));
  double theta = 0.0;
  const double scale = b.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vector w = b * v;
    theta = v.dot(w);
    const double resid = (w - theta * v).norm();
    if (resid <= tol_rel * std::abs(theta) + 1e-14 * scale) return theta;
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
  }
  return theta;
}

}  // namespace detail

// Largest singular value via power iteration on the Gram form, deterministic
// start, iteration cap, residual convergence check.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& a) {
  require_finite(a, "operator_norm");
  if (a.size() == 0) return 0.0;
  Matrix m = a.derived();
  Matrix gram = m.cols() <= m.rows() ? Matrix(m.transpose() * m)
                                     : Matrix(m * m.transpose());
  const double top = detail::top_eigen_sym(gram);
  return std::sqrt(std::max(top, 0.0));
}

namespace detail {

// Gelfand estimate |A^k|^(1/k) at k = 2^levels, computed by repeated
// squaring with per-level renormalization so only O(levels) products of
// unit-norm matrices are ever formed.
inline double gelfand_radius(const Matrix& a, int levels) {
  double s = operator_norm(a);
  if (s == 0.0) return 0.0;
  Matrix m = a / s;
  double log_norm = std::log(s);  // log |A^(2^j)|, j = 0
  for (int j = 1; j <= levels; ++j) {
    Matrix sq = m * m;
    const double s2 = operator_norm(sq);
    if (s2 == 0.0) return 0.0;  // nilpotent
    log_norm = 2.0 * log_norm + std::log(s2);
    m = sq / s2;
  }
  return std::exp(log_norm / std::ldexp(1.0, levels));
}

}  // namespace detail

// Spectral radius (max modulus of eigenvalues).  A coarse Gelfand estimate
// is refined by power iteration on A when the dominant eigenvalue is real;
// rotational (complex-dominant) spectra make the power iterates oscillate,
// in which case the deterministic fallback is a high-order Gelfand estimate,
// accurate to ~1e-10 relative at k = 2^48.
template <typename Derived>
double spectral_radius(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "spectral_radius");
  require_finite(a, "spectral_radius");
  if (a.size() == 0) return 0.0;
  Matrix m = a.derived();
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;

  const double coarse = detail::gelfand_radius(m, 20);
  if (coarse == 0.0) return 0.0;

  Vector v = detail::deterministic_unit_vector(m.rows(), 17);
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < 20000; ++it) {
    Vector w = m * v;
    lambda = v.dot(w);
    const double resid = (w - lambda * v).norm();
    if (resid <= 1e-12 * std::abs(lambda) + 1e-15 * scale) {
      converged = true;
      break;
    }
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
  }
  if (converged && std::abs(std::abs(lambda) - coarse) <= 1e-3 * coarse) {
    return std::abs(lambda);
  }
  return detail::gelfand_radius(m, 48);
}

// Smallest eigenvalue of a symmetric matrix by shifted power iteration on
// s*I - A with s = |A|_2.  Rejects inputs asymmetric beyond 1e-10.
template <typename Derived>
double min_eigenvalue_spd(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "min_eigenvalue_spd");
  require_finite(a, "min_eigenvalue_spd");
  Matrix m = a.derived();
  if (m.size() == 0) return 0.0;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidInput("min_eigenvalue_spd: matrix not symmetric within 1e-10");
  }
  m = 0.5 * (m + m.transpose());
  const double s = operator_norm(m);
  if (s == 0.0) return 0.0;
  const Matrix shifted = s * Matrix::Identity(m.rows(), m.cols()) - m;
  const double top = detail::top_eigen_sym(shifted);
  return s - std::max(top, 0.0);
}

// tau = min{k >= 1 : |A^k| <= rho0}, gamma = rho0^{-1} max_{0<=k<tau} |A^k|.
// Together they certify |A^k| <= gamma * rho0^(k/tau) at every lag.
struct DependenceProfile {
  double rho0 = 0.5;
  int tau = 1;
  double gamma = 1.0;  // upper-bound choice from the construction, not minimal
  std::vector<double> norms;  // |A^k| for k = 0..kmax

  double envelope(int k) const {
    return gamma * std::pow(rho0, static_cast<double>(k) / tau);
  }
};

// |A^k| for k = 0..kmax, one fresh multiplication per lag so the profile is
// available at every lag; the running power is renormalized to limit drift.
template <typename Derived>
std::vector<double> power_norms(const Eigen::MatrixBase<Derived>& a, int kmax) {
  require_square(a, "power_norms");
  require_finite(a, "power_norms");
  if (kmax < 0) throw InvalidInput("power_norms: kmax must be >= 0");
  Matrix m = a.derived();
  std::vector<double> norms(static_cast<std::size_t>(kmax) + 1, 0.0);
  norms[0] = 1.0;
  Matrix power = Matrix::Identity(m.rows(), m.cols());
  double log_scale = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    power = m * power;
    const double s = operator_norm(power);
    if (s == 0.0) break;  // nilpotent: all later norms are exactly zero
    norms[static_cast<std::size_t>(k)] = std::exp(log_scale + std::log(s));
    power /= s;
    log_scale += std::log(s);
  }
  return norms;
}

template <typename Derived>
DependenceProfile dependence_profile(const Eigen::MatrixBase<Derived>& a,
                                     double rho0, int kmax) {
  if (!(rho0 > 0.0 && rho0 < 1.0)) {
    throw InvalidInput("dependence_profile: rho0 must lie in (0,1)");
  }
  if (kmax < 1) throw InvalidInput("dependence_profile: kmax must be >= 1");
  if (spectral_radius(a) >= 1.0) {
    throw NonStationaryError("dependence_profile: spectral radius >= 1");
  }

  DependenceProfile profile;
  profile.rho0 = rho0;
  profile.norms = power_norms(a, kmax);

  int tau = -1;
  for (int k = 1; k <= kmax; ++k) {
    if (profile.norms[static_cast<std::size_t>(k)] <= rho0) {
      tau = k;
      break;
    }
  }
  if (tau < 0) {
    throw HorizonExceededError("dependence_profile: no k <= kmax reaches rho0");
  }
  profile.tau = tau;
  double peak = 0.0;
  for (int k = 0; k < tau; ++k) {
    peak = std::max(peak, profile.norms[static_cast<std::size_t>(k)]);
  }
  profile.gamma = peak / rho0;
  return profile;
}

}  // namespace tsr
