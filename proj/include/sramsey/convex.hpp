#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "embeddings.hpp"
#include "parallel.hpp"
#include "ramsey.hpp"
#include "rational.hpp"
#include "simplex.hpp"

namespace sramsey {

/// Nonnegative weights summing to one over distinct B-copies in C.
struct AffineWitness {
  std::vector<std::vector<Point>> support;  // maps B -> C, sorted
  std::vector<Rational> weights;

  static AffineWitness point_mass(std::vector<Point> f) { return {{std::move(f)}, {Rational(1)}}; }
};

/// Empty string when `v` is a well-formed affine witness over Emb(B,C).
inline std::string affine_witness_violation(const AffineWitness& v, const FinStructure& B, const FinStructure& C) {
  if (v.support.size() != v.weights.size()) return "support and weights differ in length";
  Rational total = 0;
  for (std::size_t i = 0; i < v.support.size(); ++i) {
    if (i && !(v.support[i - 1] < v.support[i])) return "support is not strictly increasing";
    if (v.weights[i] < 0) return "weight " + std::to_string(i) + " is negative";
    if (auto why = embedding_violation(B, C, v.support[i]); !why.empty())
      return "support entry " + std::to_string(i) + ": " + why;
    total += v.weights[i];
  }
  if (total != 1) return "weights sum to " + format_rational(total) + ", not 1";
  return {};
}

/// Finite formal combination of tuples, sorted by tuple.
using FormalCombination = std::vector<std::pair<Tuple, Rational>>;

/// v o a': the images of a' under the support embeddings, weighted, with
/// coincident images merged.
inline FormalCombination compose_affine(const AffineWitness& v, const FinStructure& A, const Tuple& a,
                                        const FinStructure& B, const Tuple& a_prime) {
  auto copies = copies_of_tuple(A, a, B);
  if (std::none_of(copies.begin(), copies.end(), [&](const TupleCopy& c) { return c.image == a_prime; }))
    throw PreconditionError("compose_affine: tuple is not a copy of the base tuple in B");
  std::map<Tuple, Rational> acc;
  for (std::size_t i = 0; i < v.support.size(); ++i) {
    Tuple img(a_prime.size());
    for (std::size_t j = 0; j < img.size(); ++j) img[j] = v.support[i][a_prime[j]];
    acc[img] += v.weights[i];
  }
  return {acc.begin(), acc.end()};
}

/// Colouring of (C choose a) by vertices of the r-cube.
struct VectorColoring {
  std::vector<Tuple> domain;             // copies of a in C, copies_of_tuple order
  int r = 1;
  std::vector<std::vector<int>> values;  // per domain entry, r entries in {0,1}

  int index_of(const Tuple& t) const {
    auto it = std::find(domain.begin(), domain.end(), t);
    return it == domain.end() ? -1 : static_cast<int>(it - domain.begin());
  }
};

inline std::vector<Tuple> copy_images(const FinStructure& A, const Tuple& a, const FinStructure& C) {
  std::vector<Tuple> out;
  for (auto& c : copies_of_tuple(A, a, C)) out.push_back(std::move(c.image));
  return out;
}

/// The colouring whose flattened 0/1 array (entry-major) is the binary
/// expansion of `code`, most significant bit first.
inline VectorColoring coloring_from_code(std::vector<Tuple> domain, int r, std::uint64_t code) {
  VectorColoring c{std::move(domain), r, {}};
  const std::size_t bits = c.domain.size() * static_cast<std::size_t>(r);
  c.values.assign(c.domain.size(), std::vector<int>(r, 0));
  for (std::size_t k = 0; k < bits; ++k) c.values[k / r][k % r] = static_cast<int>(code >> (bits - 1 - k) & 1);
  return c;
}

inline std::vector<Rational> eval_coloring(const VectorColoring& c, const FormalCombination& w) {
  std::vector<Rational> out(c.r, Rational(0));
  for (const auto& [t, lambda] : w) {
    int idx = c.index_of(t);
    if (idx < 0) throw PreconditionError("eval_coloring: tuple outside the colouring's domain");
    for (int i = 0; i < c.r; ++i)
      if (c.values[idx][i]) out[i] += lambda;
  }
  return out;
}

/// The balancing system: lambda over Emb(B,C), sum lambda = 1, and for every
/// pair of copies a', a'' of a in B and every coordinate i,
/// |c_i(v o a') - c_i(v o a'')| <= eps as two one-sided rows.
struct BalanceSystem {
  std::vector<std::vector<Point>> b_copies;  // variables
  std::vector<Tuple> a_copies_in_b;
  LpSystem lp;
};

inline BalanceSystem balance_system(const VectorColoring& c, const FinStructure& A, const Tuple& a,
                                    const FinStructure& B, const FinStructure& C, const Rational& eps) {
  if (eps < 0) throw PreconditionError("epsilon must be nonnegative");
  BalanceSystem bs{embedding_maps(B, C), copy_images(A, a, B), {}};
  const int nv = static_cast<int>(bs.b_copies.size());
  bs.lp.num_vars = nv;
  bs.lp.eq.push_back(std::vector<Rational>(nv, Rational(1)));
  bs.lp.eq_rhs.push_back(1);
  // value[q][i][f] = c_i(f(q))
  const std::size_t nq = bs.a_copies_in_b.size();
  std::vector<std::vector<std::vector<int>>> value(nq, std::vector<std::vector<int>>(c.r, std::vector<int>(nv)));
  for (std::size_t q = 0; q < nq; ++q)
    for (int f = 0; f < nv; ++f) {
      Tuple img(a.size());
      for (std::size_t j = 0; j < img.size(); ++j) img[j] = bs.b_copies[f][bs.a_copies_in_b[q][j]];
      int idx = c.index_of(img);
      if (idx < 0) throw PreconditionError("balance system: colouring domain misses a copy in C");
      for (int i = 0; i < c.r; ++i) value[q][i][f] = c.values[idx][i];
    }
  for (std::size_t q1 = 0; q1 < nq; ++q1)
    for (std::size_t q2 = q1 + 1; q2 < nq; ++q2)
      for (int i = 0; i < c.r; ++i)
        for (int dir : {1, -1}) {
          std::vector<Rational> row(nv);
          for (int f = 0; f < nv; ++f) row[f] = dir * (value[q1][i][f] - value[q2][i][f]);
          bs.lp.le.push_back(std::move(row));
          bs.lp.le_rhs.push_back(eps);
        }
  return bs;
}

struct LpWitnessResult {
  bool feasible = false;
  std::optional<AffineWitness> witness;
  std::vector<Rational> farkas_eq, farkas_le;
  std::size_t pivots = 0;
};

inline LpWitnessResult lp_witness(const VectorColoring& c, const FinStructure& A, const FinStructure& B,
                                  const FinStructure& C, const Tuple& a, const Rational& eps) {
  auto bs = balance_system(c, A, a, B, C, eps);
  auto sol = solve_feasibility(bs.lp);
  LpWitnessResult out;
  out.pivots = sol.pivots;
  out.feasible = sol.feasible;
  if (sol.feasible) {
    AffineWitness w;
    for (std::size_t f = 0; f < bs.b_copies.size(); ++f)
      if (sol.x[f] != 0) {
        w.support.push_back(bs.b_copies[f]);
        w.weights.push_back(sol.x[f]);
      }
    out.witness = std::move(w);
  } else {
    out.farkas_eq = std::move(sol.farkas_eq);
    out.farkas_le = std::move(sol.farkas_le);
  }
  return out;
}

/// Re-substitutes a witness and checks every balance constraint exactly by
/// evaluating the colouring on v o a' for all copies a'.
inline std::string balance_violation(const VectorColoring& c, const FinStructure& A, const Tuple& a,
                                     const FinStructure& B, const FinStructure& C, const Rational& eps,
                                     const AffineWitness& v) {
  if (auto why = affine_witness_violation(v, B, C); !why.empty()) return why;
  auto copies = copy_images(A, a, B);
  std::vector<std::vector<Rational>> vals;
  for (const auto& q : copies) vals.push_back(eval_coloring(c, compose_affine(v, A, a, B, q)));
  for (std::size_t q1 = 0; q1 < vals.size(); ++q1)
    for (std::size_t q2 = q1 + 1; q2 < vals.size(); ++q2)
      for (int i = 0; i < c.r; ++i) {
        Rational diff = vals[q1][i] - vals[q2][i];
        if (diff < 0) diff = -diff;
        if (diff > eps)
          return "copies " + std::to_string(q1) + " and " + std::to_string(q2) + " differ by " +
                 format_rational(diff) + " in coordinate " + std::to_string(i);
      }
  return {};
}

struct EcrpVerdict {
  Answer kind = Answer::unknown;
  std::uint64_t colorings = 0;  // number of colourings in the sweep
  std::uint64_t guard = 0;
  std::optional<VectorColoring> counterexample;
  LpWitnessResult counterexample_lp;
};

inline constexpr std::uint64_t default_ecrp_guard = std::uint64_t{1} << 20;

/// Sweeps every colouring of (C choose a) into the r-cube in code order and
/// decides the balancing LP for each. No reports the least infeasible
/// colouring; beyond the guard the verdict is Unknown.
inline EcrpVerdict check_ecrp_instance(const FinStructure& A, const Tuple& a, const FinStructure& B,
                                       const FinStructure& C, int r, const Rational& eps,
                                       std::uint64_t guard = default_ecrp_guard, int workers = 1) {
  if (r < 1) throw PreconditionError("check_ecrp_instance: r must be at least 1");
  if (eps < 0) throw PreconditionError("check_ecrp_instance: epsilon must be nonnegative");
  if (!embeds(A, B) || !embeds(B, C)) throw PreconditionError("check_ecrp_instance: A <= B <= C required");
  EcrpVerdict v;
  v.guard = guard;
  auto domain = copy_images(A, a, C);
  const std::size_t bits = domain.size() * static_cast<std::size_t>(r);
  if (bits >= 63 || (std::uint64_t{1} << bits) > guard) return v;
  v.colorings = std::uint64_t{1} << bits;
  auto first = parallel_find_first(v.colorings, workers, [&](std::size_t code) {
    return !lp_witness(coloring_from_code(domain, r, code), A, B, C, a, eps).feasible;
  });
  if (first < v.colorings) {
    v.kind = Answer::no;
    v.counterexample = coloring_from_code(domain, r, first);
    v.counterexample_lp = lp_witness(*v.counterexample, A, B, C, a, eps);
  } else {
    v.kind = Answer::yes;
  }
  return v;
}

inline EcrpVerdict strong_ecrp_instance(const FinStructure& A, const Tuple& a, const FinStructure& B,
                                        const FinStructure& C, int r, std::uint64_t guard = default_ecrp_guard,
                                        int workers = 1) {
  return check_ecrp_instance(A, a, B, C, r, Rational(0), guard, workers);
}

}  // namespace sramsey
