#pragma once

//
// Stochastic generators: the transition-matrix design recipes, VAR(1) and
// finite-MA linear-process simulators, the AR(1) error process, and the
// synthetic regression dataset.  Everything draws from an explicit Rng
// stream; identical (recipe, sizes, seed) gives bit-identical output.
//

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tsrobust/linalg.hpp"
#include "tsrobust/rng.hpp"

namespace tsr {

enum class DesignKind { Banded, BlockDiag, Toeplitz, RandomSparse, ExampleShift };

struct VarDesign {
  DesignKind kind = DesignKind::Banded;
  double decay = 0.5;   // lambda of the banded/toeplitz/shift recipes
  int width = -1;       // banded bandwidth / block size / sparse support; -1 -> floor(log p)
  int shift_span = 2;   // how many leading neighbours feed each coordinate
  bool stabilize = true;

  static VarDesign banded(double lambda = 0.5, int s = -1, bool stabilize = true) {
    return {DesignKind::Banded, lambda, s, 2, stabilize};
  }
  static VarDesign block_diag(int s = -1, int span = 2) {
    return {DesignKind::BlockDiag, 0.0, s, span, false};
  }
  static VarDesign toeplitz(double lambda = 0.5, bool stabilize = true) {
    return {DesignKind::Toeplitz, lambda, -1, 2, stabilize};
  }
  static VarDesign random_sparse(int s = -1, bool stabilize = true) {
    return {DesignKind::RandomSparse, 0.0, s, 2, stabilize};
  }
  static VarDesign example_shift(double lambda, int span) {
    return {DesignKind::ExampleShift, lambda, -1, span, false};
  }
  static VarDesign by_name(const std::string& name);

  std::string name() const;
};

// Row sparsity convention for the designs: floor of the natural log.
int default_sparsity(int p);

// Materializes the recipe at size p x p; stabilized recipes are divided by
// 2*lambda_max(A) so the spectral radius lands exactly on 0.5.
Matrix build_design(const VarDesign& design, int p, Rng& rng);

struct SeriesSample {
  Matrix X;  // (n+1) x p, rows X_0..X_n
  std::string design;
  std::uint64_t seed = 0;

  int n() const { return static_cast<int>(X.rows()) - 1; }
  int dim() const { return static_cast<int>(X.cols()); }
};

// max(200, 10*tau); tau = 1 covers every stabilized design here.
int default_burn_in(int tau = 1);

SeriesSample simulate_var(const Matrix& a, int n, const InnovationDist& innov,
                          int burn_in, Rng& rng);

// Finite-MA approximation of X_i = mu + sum_k A_k eps_{i-k} with horizon K.
// coeffs[0] must be the identity.  When a profile is given, the truncated
// tail gamma*rho0^(K/tau) must already be below 1e-8.
SeriesSample simulate_linear_process(const std::vector<Matrix>& coeffs,
                                     const Vector& mu, int n,
                                     const InnovationDist& innov, int truncation,
                                     Rng& rng,
                                     const DependenceProfile* profile = nullptr);

Vector simulate_ar_error(double rho, int n, const InnovationDist& innov,
                         Rng& rng, int burn_in = 200);

struct RegressionDataset {
  Matrix X;          // n x p covariates
  Vector Y;          // n responses
  Vector beta_star;  // p coefficients, first s entries 1
  Vector xi;         // n errors
  double rho = 0.0;  // AR coefficient drawn for the error process
  int sparsity = 0;  // s = 2*floor(log p)
  std::uint64_t seed = 0;
};

RegressionDataset make_regression_dataset(int p, int n, Rng& rng);

}  // namespace tsr
