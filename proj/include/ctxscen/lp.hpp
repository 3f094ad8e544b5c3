#pragma once

#include <vector>

#include "ctxscen/rational.hpp"

namespace ctxscen {

/// Result of an exact feasibility solve of A x = b, x >= 0 with b >= 0.
struct FeasibilityResult {
  bool feasible = false;
  std::vector<Rational> x;  // a basic feasible point when feasible
  /// When infeasible: y with y.A_j <= 0 for every column j and y.b > 0.
  std::vector<Rational> farkas;
  std::size_t pivots = 0;
};

/// Phase-I simplex on a dense tableau with Bland's rule. A is row-major
/// (rows x cols); every b_i must be non-negative.
FeasibilityResult solve_feasibility(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b);

}  // namespace ctxscen
