#include "tsrobust/process.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tsr {

int default_sparsity(int p) {
  return static_cast<int>(std::floor(std::log(static_cast<double>(p))));
}

std::string VarDesign::name() const {
  switch (kind) {
    case DesignKind::Banded: return "banded";
    case DesignKind::BlockDiag: return "block";
    case DesignKind::Toeplitz: return "toeplitz";
    case DesignKind::RandomSparse: return "random_sparse";
    case DesignKind::ExampleShift: return "example_shift";
  }
  return "unknown";
}

VarDesign VarDesign::by_name(const std::string& name) {
  if (name == "banded") return banded();
  if (name == "block") return block_diag();
  if (name == "toeplitz") return toeplitz();
  if (name == "random_sparse" || name == "random") return random_sparse();
  if (name == "example_shift") return example_shift(0.55, 3);
  throw InvalidInput("unknown design: " + name);
}

namespace {

Matrix banded_matrix(int p, double lambda, int s) {
  if (s >= p) throw InvalidInput("banded design needs bandwidth < p");
  Matrix a = Matrix::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = std::max(0, i - s); j <= std::min(p - 1, i + s); ++j) {
      a(i, j) = std::pow(lambda, std::abs(i - j));
    }
  }
  return a;
}

Matrix toeplitz_matrix(int p, double lambda) {
  Matrix a(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) a(i, j) = std::pow(lambda, std::abs(i - j));
  }
  return a;
}

// Entries lambda^(j-i+1) on the leading `span` diagonals.
void fill_shift_block(Matrix& a, int offset, int size, double lambda, int span) {
  for (int r = 0; r < size; ++r) {
    for (int d = 0; d < span && r + d < size; ++d) {
      a(offset + r, offset + r + d) = std::pow(lambda, d + 1);
    }
  }
}

Matrix block_diag_matrix(int p, int s, int span, Rng& rng) {
  if (s < 1) throw InvalidInput("block design needs block size >= 1");
  Matrix a = Matrix::Zero(p, p);
  for (int offset = 0; offset < p; offset += s) {
    const int size = std::min(s, p - offset);  // last block truncated
    const double lambda_i = rng.uniform(-0.8, 0.8);
    fill_shift_block(a, offset, size, lambda_i, span);
  }
  return a;
}

Matrix random_sparse_matrix(int p, int s, Rng& rng) {
  const int support = s * s;
  const int slots = p * p - p;
  if (support > slots) throw InvalidInput("random sparse support exceeds off-diagonal slots");
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix a = Matrix::Zero(p, p);
    for (int i = 0; i < p; ++i) a(i, i) = rng.uniform(-0.8, 0.8);
    // partial Fisher-Yates over the off-diagonal slots
    std::vector<int> idx(static_cast<std::size_t>(slots));
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < support; ++k) {
      const int j = k + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(slots - k));
      std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
      int flat = idx[static_cast<std::size_t>(k)];
      const int row = flat / (p - 1);
      int col = flat % (p - 1);
      if (col >= row) ++col;  // skip the diagonal slot
      a(row, col) = rng.normal();
    }
    if (spectral_radius(a) > 1e-12) return a;
    // numerically zero radius would make the 2*lambda_max scaling degenerate
  }
  throw InvalidInput("random sparse design kept drawing zero spectral radius");
}

Matrix example_shift_matrix(int p, double lambda, int span) {
  Matrix a = Matrix::Zero(p, p);
  fill_shift_block(a, 0, p, lambda, span);
  return a;
}

}  // namespace

Matrix build_design(const VarDesign& design, int p, Rng& rng) {
  if (p < 2) throw InvalidInput("build_design: p must be >= 2");
  const int s = design.width >= 0 ? design.width : default_sparsity(p);
  Matrix a;
  switch (design.kind) {
    case DesignKind::Banded: a = banded_matrix(p, design.decay, s); break;
    case DesignKind::BlockDiag: a = block_diag_matrix(p, s, design.shift_span, rng); break;
    case DesignKind::Toeplitz: a = toeplitz_matrix(p, design.decay); break;
    case DesignKind::RandomSparse: a = random_sparse_matrix(p, s, rng); break;
    case DesignKind::ExampleShift: a = example_shift_matrix(p, design.decay, design.shift_span); break;
  }
  if (design.stabilize) {
    const double radius = spectral_radius(a);
    if (radius <= 0.0) throw InvalidInput("build_design: cannot stabilize a zero-radius recipe");
    a /= 2.0 * radius;
  }
  return a;
}

int default_burn_in(int tau) { return std::max(200, 10 * tau); }

namespace {

// Cheap stationarity certificates before paying for a full spectral radius.
bool certified_stable(const Matrix& a) {
  if (operator_norm(a) < 1.0) return true;
  return detail::gelfand_radius(a, 6) < 1.0;  // |A^64|^(1/64)
}

void require_stable(const Matrix& a, const char* who) {
  require_square(a, who);
  require_finite(a, who);
  if (certified_stable(a)) return;
  if (spectral_radius(a) >= 1.0) {
    throw NonStationaryError(std::string(who) + ": spectral radius >= 1");
  }
}

Vector draw_innovation(int p, const InnovationDist& innov, Rng& rng) {
  Vector e(p);
  for (int j = 0; j < p; ++j) e[j] = innov.draw(rng);
  return e;
}

}  // namespace

SeriesSample simulate_var(const Matrix& a, int n, const InnovationDist& innov,
                          int burn_in, Rng& rng) {
  require_stable(a, "simulate_var");
  if (n < 0) throw InvalidInput("simulate_var: n must be >= 0");
  if (burn_in < 0) throw InvalidInput("simulate_var: burn_in must be >= 0");
  const int p = static_cast<int>(a.rows());

  SeriesSample out;
  out.seed = rng.seed();
  out.X.resize(n + 1, p);

  Vector x = Vector::Zero(p);
  for (int t = 0; t < burn_in; ++t) x = a * x + draw_innovation(p, innov, rng);
  out.X.row(0) = x.transpose();
  for (int i = 1; i <= n; ++i) {
    x = a * x + draw_innovation(p, innov, rng);
    out.X.row(i) = x.transpose();
  }
  return out;
}

SeriesSample simulate_linear_process(const std::vector<Matrix>& coeffs,
                                     const Vector& mu, int n,
                                     const InnovationDist& innov, int truncation,
                                     Rng& rng, const DependenceProfile* profile) {
  if (coeffs.empty()) throw InvalidInput("simulate_linear_process: no coefficients");
  const int p = static_cast<int>(coeffs.front().rows());
  for (const Matrix& c : coeffs) {
    require_square(c, "simulate_linear_process");
    require_finite(c, "simulate_linear_process");
    if (c.rows() != p) throw ShapeError("simulate_linear_process: coefficient sizes differ");
  }
  if ((coeffs.front() - Matrix::Identity(p, p)).cwiseAbs().maxCoeff() > 1e-14) {
    throw InvalidInput("simulate_linear_process: A_0 must be the identity");
  }
  if (mu.size() != p) throw ShapeError("simulate_linear_process: mu size mismatch");
  if (n < 0 || truncation < 0) throw InvalidInput("simulate_linear_process: bad sizes");
  if (profile != nullptr && profile->envelope(truncation) >= 1e-8) {
    throw InvalidInput("simulate_linear_process: truncation horizon leaves tail above 1e-8");
  }

  const int horizon = truncation;
  Matrix eps(n + 1 + horizon, p);  // rows hold eps_{-K}..eps_n in time order
  for (Eigen::Index i = 0; i < eps.rows(); ++i) {
    eps.row(i) = draw_innovation(p, innov, rng).transpose();
  }

  SeriesSample out;
  out.seed = rng.seed();
  out.X.resize(n + 1, p);
  const int m = static_cast<int>(coeffs.size()) - 1;
  for (int i = 0; i <= n; ++i) {
    Vector x = mu;
    for (int k = 0; k <= std::min(horizon, m); ++k) {
      x += coeffs[static_cast<std::size_t>(k)] * eps.row(i - k + horizon).transpose();
    }
    out.X.row(i) = x.transpose();
  }
  return out;
}

Vector simulate_ar_error(double rho, int n, const InnovationDist& innov, Rng& rng,
                         int burn_in) {
  if (!(std::abs(rho) < 1.0)) throw NonStationaryError("simulate_ar_error: |rho| must be < 1");
  if (n < 0 || burn_in < 0) throw InvalidInput("simulate_ar_error: bad sizes");
  double xi = 0.0;
  for (int t = 0; t < burn_in; ++t) xi = rho * xi + innov.draw(rng);
  Vector out(n);
  for (int i = 0; i < n; ++i) {
    xi = rho * xi + innov.draw(rng);
    out[i] = xi;
  }
  return out;
}

RegressionDataset make_regression_dataset(int p, int n, Rng& rng) {
  if (p < 4) throw InvalidInput("make_regression_dataset: p must be >= 4");
  if (n < 1) throw InvalidInput("make_regression_dataset: n must be >= 1");

  RegressionDataset out;
  out.seed = rng.seed();

  const Matrix a = build_design(VarDesign::toeplitz(0.5, true), p, rng);
  const InnovationDist t5 = InnovationDist::student_t(5.0);
  out.X = simulate_var(a, n - 1, t5, default_burn_in(), rng).X;

  out.rho = rng.uniform(-0.8, 0.8);
  out.xi = simulate_ar_error(out.rho, n, t5, rng);

  out.sparsity = 2 * static_cast<int>(std::floor(std::log(static_cast<double>(p))));
  out.beta_star = Vector::Zero(p);
  for (int j = 0; j < out.sparsity && j < p; ++j) out.beta_star[j] = 1.0;

  out.Y = out.X * out.beta_star + out.xi;
  return out;
}

}  // namespace tsr
