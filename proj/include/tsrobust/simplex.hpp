#pragma once

//
// Dense tableau simplex for  max g'y  s.t.  D y <= e, y >= 0  with e >= 0,
// so the all-slack basis is feasible and no phase-1 is needed.  Pivoting is
// deterministic: largest reduced cost with lowest-index ties, falling back
// to Bland's rule after a degeneracy stall so termination is guaranteed.
// `row_duals` carries the shadow prices, recomputed from a fresh
// factorization of the final basis.
//

#include "tsrobust/linalg.hpp"

namespace tsr {

struct SimplexResult {
  bool optimal = false;
  bool unbounded = false;
  double objective = 0.0;
  Vector y;          // primal solution of the max problem
  Vector row_duals;  // dual values per constraint row
  int iterations = 0;
};

SimplexResult simplex_max(const Matrix& d, const Vector& e, const Vector& g,
                          int max_iterations = 200000);

}  // namespace tsr
