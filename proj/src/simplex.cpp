#include "tsrobust/simplex.hpp"

#include <cmath>

#include "tsrobust/errors.hpp"

namespace tsr {

namespace {

constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;

}  // namespace

SimplexResult simplex_max(const Matrix& d, const Vector& e, const Vector& g,
                          int max_iterations) {
  const Eigen::Index m = d.rows();
  const Eigen::Index nv = d.cols();
  if (e.size() != m || g.size() != nv) throw ShapeError("simplex_max: size mismatch");
  if (e.minCoeff() < 0.0) throw InvalidInput("simplex_max: rhs must be nonnegative");

  // Tableau columns: [structural | slack | rhs]; cost row holds z_j - g_j.
  const Eigen::Index ncols = nv + m;
  Matrix t(m + 1, ncols + 1);
  t.setZero();
  t.block(0, 0, m, nv) = d;
  t.block(0, nv, m, m) = Matrix::Identity(m, m);
  t.block(0, ncols, m, 1) = e;
  for (Eigen::Index j = 0; j < nv; ++j) t(m, j) = -g[j];

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = nv + i;

  SimplexResult out;
  bool bland = false;
  int stall = 0;
  double last_objective = 0.0;

  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    // entering column
    Eigen::Index enter = -1;
    if (bland) {
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (t(m, j) < -kCostTol) { enter = j; break; }
      }
    } else {
      double best = -kCostTol;
      for (Eigen::Index j = 0; j < ncols; ++j) {
        if (t(m, j) < best) { best = t(m, j); enter = j; }
      }
    }
    if (enter < 0) {
      out.optimal = true;
      break;
    }

    // ratio test; ties on the ratio go to the smallest basis index
    Eigen::Index leave = -1;
    double best_ratio = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = t(i, enter);
      if (a <= kPivotTol) continue;
      const double ratio = t(i, ncols) / a;
      if (leave < 0 || ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 &&
           basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      out.unbounded = true;
      break;
    }

    // pivot
    const double piv = t(leave, enter);
    t.row(leave) /= piv;
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t(i, enter);
      if (f != 0.0) t.row(i) -= f * t.row(leave);
    }
    basis[static_cast<std::size_t>(leave)] = enter;

    const double objective = -t(m, ncols);
    if (objective <= last_objective + 1e-13) {
      if (++stall > 2 * static_cast<int>(m + nv)) bland = true;
    } else {
      stall = 0;
    }
    last_objective = std::max(last_objective, objective);
  }

  if (!out.optimal && !out.unbounded) {
    throw std::runtime_error("simplex_max: iteration cap reached");
  }
  if (out.unbounded) return out;

  // Solution and duals from a fresh factorization of the final basis; the
  // tableau entries have accumulated O(iterations) rounding by now.
  Matrix basis_cols(m, m);
  Vector basis_cost(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index col = basis[static_cast<std::size_t>(i)];
    if (col < nv) {
      basis_cols.col(i) = d.col(col);
      basis_cost[i] = g[col];
    } else {
      basis_cols.col(i) = Vector::Unit(m, col - nv);
      basis_cost[i] = 0.0;
    }
  }
  Eigen::PartialPivLU<Matrix> lu(basis_cols);
  const Vector xb = lu.solve(e);
  const Vector duals = lu.transpose().solve(basis_cost);

  out.y = Vector::Zero(nv);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index col = basis[static_cast<std::size_t>(i)];
    if (col < nv) out.y[col] = std::max(xb[i], 0.0);
  }
  out.row_duals = duals.cwiseMax(0.0);
  out.objective = g.dot(out.y);
  return out;
}

}  // namespace tsr
