#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rational.hpp"

namespace sramsey {

/// Feasibility system over x >= 0:  eq * x = eq_rhs,  le * x <= le_rhs.
struct LpSystem {
  int num_vars = 0;
  std::vector<std::vector<Rational>> eq;
  std::vector<Rational> eq_rhs;
  std::vector<std::vector<Rational>> le;
  std::vector<Rational> le_rhs;
};

/// Either a vertex x of the feasible region, or a Farkas certificate (y, z)
/// with z >= 0, y.eq + z.le >= 0 componentwise and y.eq_rhs + z.le_rhs < 0.
struct LpResult {
  bool feasible = false;
  std::vector<Rational> x;
  std::vector<Rational> farkas_eq;
  std::vector<Rational> farkas_le;
  std::size_t pivots = 0;
};

/// Empty string when x satisfies the system exactly.
inline std::string lp_point_violation(const LpSystem& s, const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != s.num_vars) return "point has the wrong dimension";
  for (int j = 0; j < s.num_vars; ++j)
    if (x[j] < 0) return "variable " + std::to_string(j) + " is negative";
  for (std::size_t i = 0; i < s.eq.size(); ++i) {
    Rational lhs = 0;
    for (int j = 0; j < s.num_vars; ++j) lhs += s.eq[i][j] * x[j];
    if (lhs != s.eq_rhs[i]) return "equality row " + std::to_string(i) + " violated";
  }
  for (std::size_t i = 0; i < s.le.size(); ++i) {
    Rational lhs = 0;
    for (int j = 0; j < s.num_vars; ++j) lhs += s.le[i][j] * x[j];
    if (lhs > s.le_rhs[i]) return "inequality row " + std::to_string(i) + " violated";
  }
  return {};
}

/// Empty string when (y, z) proves the system infeasible.
inline std::string farkas_violation(const LpSystem& s, const std::vector<Rational>& y, const std::vector<Rational>& z) {
  if (y.size() != s.eq.size() || z.size() != s.le.size()) return "certificate has the wrong dimension";
  for (std::size_t i = 0; i < z.size(); ++i)
    if (z[i] < 0) return "multiplier of inequality row " + std::to_string(i) + " is negative";
  for (int j = 0; j < s.num_vars; ++j) {
    Rational col = 0;
    for (std::size_t i = 0; i < y.size(); ++i) col += y[i] * s.eq[i][j];
    for (std::size_t i = 0; i < z.size(); ++i) col += z[i] * s.le[i][j];
    if (col < 0) return "combined column " + std::to_string(j) + " is negative";
  }
  Rational rhs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) rhs += y[i] * s.eq_rhs[i];
  for (std::size_t i = 0; i < z.size(); ++i) rhs += z[i] * s.le_rhs[i];
  if (rhs >= 0) return "combined right-hand side is not negative";
  return {};
}

/// Phase-one simplex on a dense exact tableau with Bland's rule.
///
/// Columns: structural variables, one slack per inequality row, one
/// artificial per row. Rows are sign-normalised so the right-hand side is
/// nonnegative and the artificials form the starting basis. The artificial
/// columns are kept, so the final reduced costs give the row duals.
inline LpResult solve_feasibility(const LpSystem& s) {
  const int n = s.num_vars;
  const int me = static_cast<int>(s.eq.size());
  const int ml = static_cast<int>(s.le.size());
  const int m = me + ml;
  const int slack0 = n, art0 = n + ml, width = n + ml + m;
  std::vector<std::vector<Rational>> T(m, std::vector<Rational>(width + 1));
  std::vector<int> sign(m, 1);
  for (int i = 0; i < m; ++i) {
    const bool is_eq = i < me;
    const auto& row = is_eq ? s.eq[i] : s.le[i - me];
    const Rational& rhs = is_eq ? s.eq_rhs[i] : s.le_rhs[i - me];
    sign[i] = rhs < 0 ? -1 : 1;
    for (int j = 0; j < n; ++j) T[i][j] = sign[i] * row[j];
    if (!is_eq) T[i][slack0 + (i - me)] = sign[i];
    T[i][art0 + i] = 1;
    T[i][width] = sign[i] * rhs;
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = art0 + i;
  // Reduced costs for min sum(artificials); last entry is -objective.
  std::vector<Rational> d(width + 1);
  for (int j = 0; j <= width; ++j) {
    Rational c = (j >= art0 && j < width) ? 1 : 0;
    for (int i = 0; i < m; ++i) c -= T[i][j];
    d[j] = c;
  }
  for (int j = art0; j < width; ++j) d[j] = 0;

  LpResult res;
  while (true) {
    int enter = -1;
    for (int j = 0; j < width; ++j)
      if (d[j] < 0) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    Rational best;
    for (int i = 0; i < m; ++i) {
      if (T[i][enter] <= 0) continue;
      Rational ratio = T[i][width] / T[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    // The phase-one objective is bounded below by zero, so a leaving row exists.
    const Rational piv = T[leave][enter];
    for (auto& v : T[leave]) v /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave || T[i][enter] == 0) continue;
      const Rational f = T[i][enter];
      for (int j = 0; j <= width; ++j) T[i][j] -= f * T[leave][j];
    }
    if (d[enter] != 0) {
      const Rational f = d[enter];
      for (int j = 0; j <= width; ++j) d[j] -= f * T[leave][j];
    }
    basis[leave] = enter;
    ++res.pivots;
  }
  // d[width] holds -(optimal sum of artificials).
  if (d[width] == 0) {
    res.feasible = true;
    res.x.assign(n, 0);
    for (int i = 0; i < m; ++i)
      if (basis[i] < n) res.x[basis[i]] = T[i][width];
    return res;
  }
  // Row duals: pi_i = 1 - d(artificial_i); w = -pi certifies the normalised
  // rows, and undoing the sign normalisation gives the certificate.
  res.farkas_eq.resize(me);
  res.farkas_le.resize(ml);
  for (int i = 0; i < m; ++i) {
    Rational w = d[art0 + i] - 1;
    w *= sign[i];
    if (i < me) res.farkas_eq[i] = w;
    else res.farkas_le[i - me] = w;
  }
  return res;
}

}  // namespace sramsey
