#include "ctxscen/lp.hpp"

#include "ctxscen/error.hpp"

namespace ctxscen {

FeasibilityResult solve_feasibility(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b) {
  const std::size_t m = A.size();
  const std::size_t n = m ? A[0].size() : 0;
  require(b.size() == m, "right-hand side has the wrong length");
  for (const auto& row : A) require(row.size() == n, "ragged constraint matrix");
  for (const auto& v : b) require(sgn(v) >= 0, "right-hand side must be non-negative");

  // columns 0..n-1 original, n..n+m-1 artificial; last column is the rhs
  const std::size_t width = n + m + 1;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(width));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = A[i][j];
    t[i][n + i] = 1;
    t[i][width - 1] = b[i];
    basis[i] = n + i;
  }
  // reduced costs of the phase-I objective (sum of artificials); last entry is -value
  std::vector<Rational> d(width);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) d[j] -= t[i][j];
  for (std::size_t i = 0; i < m; ++i) d[width - 1] -= b[i];

  FeasibilityResult out;
  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (sgn(d[j]) < 0) {
        enter = j;
        break;
      }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      Rational r = t[i][width - 1] / t[i][enter];
      if (leave == m || r < best || (r == best && basis[i] < basis[leave])) {
        leave = i;
        best = r;
      }
    }
    // the phase-I objective is bounded below, so a leaving row always exists
    require(leave < m, "internal: unbounded phase-I direction");
    Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j < width; ++j)
        if (sgn(t[leave][j]) != 0) t[i][j] -= f * t[leave][j];
    }
    if (sgn(d[enter]) != 0) {
      Rational f = d[enter];
      for (std::size_t j = 0; j < width; ++j)
        if (sgn(t[leave][j]) != 0) d[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
    ++out.pivots;
  }

  out.feasible = sgn(d[width - 1]) == 0;
  if (out.feasible) {
    out.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) out.x[basis[i]] = t[i][width - 1];
  } else {
    out.farkas.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.farkas[i] = 1 - d[n + i];
  }
  return out;
}

}  // namespace ctxscen
