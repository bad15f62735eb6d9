// Naive reference implementations used to cross-check the library.
// None of these call the library's search code; they only read tables.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "sramsey/sramsey.hpp"

namespace oracle {

using namespace sramsey;

inline bool maps_preserve_and_reflect(const FinStructure& A, const FinStructure& B, const std::vector<Point>& f) {
  for (std::size_t s = 0; s < A.signature().size(); ++s) {
    const int k = A.signature()[s].arity;
    const int n = A.size();
    if (n == 0) continue;
    Tuple t(k, 0);
    while (true) {
      Tuple img(k);
      for (int i = 0; i < k; ++i) img[i] = f[t[i]];
      const bool in_a = std::binary_search(A.table(s).begin(), A.table(s).end(), t);
      const bool in_b = std::binary_search(B.table(s).begin(), B.table(s).end(), img);
      if (in_a != in_b) return false;
      int i = k - 1;
      while (i >= 0 && ++t[i] == n) t[i--] = 0;
      if (i < 0) break;
    }
  }
  return true;
}

/// All injections A -> B (lexicographic) that preserve and reflect relations.
inline std::vector<std::vector<Point>> embeddings(const FinStructure& A, const FinStructure& B) {
  std::vector<std::vector<Point>> out;
  std::vector<Point> f(A.size());
  std::vector<char> used(B.size(), 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == A.size()) {
      if (maps_preserve_and_reflect(A, B, f)) out.push_back(f);
      return;
    }
    for (int y = 0; y < B.size(); ++y)
      if (!used[y]) {
        used[y] = 1;
        f[i] = y;
        rec(i + 1);
        used[y] = 0;
      }
  };
  rec(0);
  return out;
}

inline bool isomorphic(const FinStructure& A, const FinStructure& B) {
  if (A.size() != B.size() || !(A.signature() == B.signature())) return false;
  std::vector<Point> p(A.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    if (maps_preserve_and_reflect(A, B, p)) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

inline std::size_t automorphism_count(const FinStructure& A) {
  std::size_t n = 0;
  std::vector<Point> p(A.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    n += maps_preserve_and_reflect(A, A, p);
  } while (std::next_permutation(p.begin(), p.end()));
  return n;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

/// Does C -> (B)^A_{r,k} hold? Decided by enumerating all r^|Emb(A,C)|
/// colourings of naive embedding lists.
inline bool arrows_exhaustive(const FinStructure& C, const FinStructure& B, const FinStructure& A, int r, int k = 1) {
  auto ac = embeddings(A, C), bc = embeddings(B, C), ab = embeddings(A, B);
  std::map<std::vector<Point>, int> idx;
  for (std::size_t i = 0; i < ac.size(); ++i) idx[ac[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> groups;
  for (const auto& f : bc) {
    std::vector<int> g;
    for (const auto& e : ab) {
      std::vector<Point> fe(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) fe[i] = f[e[i]];
      g.push_back(idx.at(fe));
    }
    groups.push_back(g);
  }
  if (bc.empty()) return false;
  std::vector<int> col(ac.size(), 0);
  while (true) {
    bool good = false;
    for (const auto& g : groups) {
      std::set<int> seen;
      for (int v : g) seen.insert(col[v]);
      if (static_cast<int>(seen.size()) <= k) {
        good = true;
        break;
      }
    }
    if (!good) return false;
    std::size_t i = 0;
    while (i < col.size() && ++col[i] == r) col[i++] = 0;
    if (i == col.size()) return true;
  }
}

/// Independent check that a colouring of Emb(A,C) (naive order) is bad.
inline bool is_bad_coloring(const FinStructure& C, const FinStructure& B, const FinStructure& A,
                            const std::vector<int>& col, int k = 1) {
  auto ac = embeddings(A, C), bc = embeddings(B, C), ab = embeddings(A, B);
  if (col.size() != ac.size()) return false;
  std::map<std::vector<Point>, int> idx;
  for (std::size_t i = 0; i < ac.size(); ++i) idx[ac[i]] = static_cast<int>(i);
  for (const auto& f : bc) {
    std::set<int> seen;
    for (const auto& e : ab) {
      std::vector<Point> fe(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) fe[i] = f[e[i]];
      seen.insert(col[idx.at(fe)]);
    }
    if (static_cast<int>(seen.size()) <= k) return false;
  }
  return true;
}

/// Least k with C -> (B)^A_{r,k}, by exhaustion.
inline int least_degree(const FinStructure& C, const FinStructure& B, const FinStructure& A, int r) {
  for (int k = 1; k <= r; ++k)
    if (arrows_exhaustive(C, B, A, r, k)) return k;
  return r + 1;
}

/// Degree of A within the bounds: the largest, over members B <= b_size
/// containing A and r <= colors, of the least k reached by some C <= c_size.
inline int degree_by_exhaustion(const ClassSpec& K, const FinStructure& A, const DegreeBounds& bounds) {
  int degree = 1;
  for (int nb = A.size(); nb <= bounds.b_size; ++nb)
    for (const auto& B : K.members_of_size(nb)) {
      if (embeddings(A, B).empty()) continue;
      for (int r = 1; r <= bounds.colors; ++r) {
        int best = r + 1;
        for (int nc = nb; nc <= bounds.c_size; ++nc)
          for (const auto& C : K.members_of_size(nc))
            if (!embeddings(B, C).empty()) best = std::min(best, least_degree(C, B, A, r));
        degree = std::max(degree, best);
      }
    }
  return degree;
}

/// LP feasibility of {x >= 0, eq x = eq_rhs, le x <= le_rhs} by vertex
/// enumeration: the region lies in a bounded simplex whenever a row of ones
/// with rhs 1 is present, so it is nonempty iff it has a vertex.
inline bool lp_feasible_by_vertices(const LpSystem& s) {
  const int n = s.num_vars;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (std::size_t i = 0; i < s.le.size(); ++i) rows.push_back(s.le[i]), rhs.push_back(s.le_rhs[i]);
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> e(n, Rational(0));
    e[j] = 1;
    rows.push_back(e);
    rhs.push_back(0);
  }
  auto feasible = [&](const std::vector<Rational>& x) {
    for (Rational v : x)
      if (v < 0) return false;
    for (std::size_t i = 0; i < s.eq.size(); ++i) {
      Rational acc = 0;
      for (int j = 0; j < n; ++j) acc += s.eq[i][j] * x[j];
      if (acc != s.eq_rhs[i]) return false;
    }
    for (std::size_t i = 0; i < s.le.size(); ++i) {
      Rational acc = 0;
      for (int j = 0; j < n; ++j) acc += s.le[i][j] * x[j];
      if (acc > s.le_rhs[i]) return false;
    }
    return true;
  };
  // Choose tight inequality rows to complete the equalities to n rows.
  const int need = n - static_cast<int>(s.eq.size());
  if (need < 0) return false;
  std::vector<int> pick;
  bool found = false;
  std::function<void(int)> rec = [&](int from) {
    if (found) return;
    if (static_cast<int>(pick.size()) == need) {
      std::vector<std::vector<Rational>> M;
      for (std::size_t i = 0; i < s.eq.size(); ++i) {
        auto row = s.eq[i];
        row.push_back(s.eq_rhs[i]);
        M.push_back(row);
      }
      for (int p : pick) {
        auto row = rows[p];
        row.push_back(rhs[p]);
        M.push_back(row);
      }
      // Gauss-Jordan; accept only a unique solution.
      int r = 0;
      for (int c = 0; c < n && r < n; ++c) {
        int piv = -1;
        for (int i = r; i < n; ++i)
          if (M[i][c] != 0) {
            piv = i;
            break;
          }
        if (piv < 0) return;
        std::swap(M[r], M[piv]);
        for (int i = 0; i < n; ++i)
          if (i != r && M[i][c] != 0) {
            Rational f = M[i][c] / M[r][c];
            for (int j = c; j <= n; ++j) M[i][j] -= f * M[r][j];
          }
        ++r;
      }
      std::vector<Rational> x(n);
      for (int i = 0; i < n; ++i) x[i] = M[i][n] / M[i][i];
      if (feasible(x)) found = true;
      return;
    }
    for (int i = from; i < static_cast<int>(rows.size()); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return found;
}

/// A random relabelling of S together with the permutation used.
inline std::pair<FinStructure, std::vector<Point>> shuffle(const FinStructure& S, std::mt19937_64& rng) {
  std::vector<Point> p(S.size());
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return {relabel(S, p), p};
}

}  // namespace oracle
