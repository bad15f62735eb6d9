#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "class_spec.hpp"
#include "coloring_search.hpp"
#include "embeddings.hpp"
#include "fraisse.hpp"

namespace sramsey {

enum class Answer { yes, no, unknown };

inline const char* to_string(Answer a) {
  switch (a) {
    case Answer::yes: return "yes";
    case Answer::no: return "no";
    case Answer::unknown: return "unknown";
  }
  return "unknown";
}

/// Emb(A,C) as colouring variables, and for each B-copy f in Emb(B,C) the
/// variables f o Emb(A,B).
struct ArrowSpace {
  FinStructure A, B, C;
  std::vector<std::vector<Point>> a_copies;
  std::vector<std::vector<Point>> b_copies;
  std::vector<std::vector<Point>> a_in_b;
  std::vector<std::vector<int>> copy_vars;

  static ArrowSpace build(const FinStructure& A, const FinStructure& B, const FinStructure& C) {
    if (!(A.signature() == B.signature() && B.signature() == C.signature()))
      throw SignatureMismatch("arrow instance: signatures differ");
    ArrowSpace s{A, B, C, embedding_maps(A, C), embedding_maps(B, C), embedding_maps(A, B), {}};
    std::map<std::vector<Point>, int> index;
    for (std::size_t i = 0; i < s.a_copies.size(); ++i) index.emplace(s.a_copies[i], static_cast<int>(i));
    for (const auto& f : s.b_copies) {
      std::vector<int> vars;
      for (const auto& e : s.a_in_b) {
        std::vector<Point> fe(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) fe[i] = f[e[i]];
        vars.push_back(index.at(fe));
      }
      std::sort(vars.begin(), vars.end());
      s.copy_vars.push_back(std::move(vars));
    }
    return s;
  }

  int index_of(const std::vector<Point>& a_map) const {
    auto it = std::lower_bound(a_copies.begin(), a_copies.end(), a_map);
    return it != a_copies.end() && *it == a_map ? static_cast<int>(it - a_copies.begin()) : -1;
  }
};

/// Permutations of Emb(A,C) induced by automorphisms of C (identity
/// excluded, at most `cap`).
inline std::vector<std::vector<int>> induced_symmetries(const FinStructure& C,
                                                        const std::vector<std::vector<Point>>& copies,
                                                        std::size_t cap = 256) {
  std::vector<std::vector<int>> out;
  std::map<std::vector<Point>, int> index;
  for (std::size_t i = 0; i < copies.size(); ++i) index.emplace(copies[i], static_cast<int>(i));
  for (const auto& alpha : automorphisms(C)) {
    bool identity = true;
    for (int p = 0; p < C.size(); ++p) identity = identity && alpha[p] == p;
    if (identity) continue;
    std::vector<int> perm(copies.size());
    for (std::size_t i = 0; i < copies.size(); ++i) {
      std::vector<Point> img(copies[i].size());
      for (std::size_t j = 0; j < img.size(); ++j) img[j] = alpha[copies[i][j]];
      perm[i] = index.at(img);
    }
    out.push_back(std::move(perm));
    if (out.size() >= cap) break;
  }
  return out;
}

/// Bad colourings for "C -> (B)^A_{r,k}": every B-copy sees >= k+1 colours.
inline ColoringProblem arrow_problem(const ArrowSpace& s, int r, int k, bool symmetries = true) {
  ColoringProblem p;
  p.num_vars = static_cast<int>(s.a_copies.size());
  p.colors = r;
  for (const auto& vars : s.copy_vars) p.clauses.push_back({{SpreadGroup{vars, k}}});
  if (symmetries) p.symmetries = induced_symmetries(s.C, s.a_copies);
  return p;
}

struct ArrowVerdict {
  Answer kind = Answer::unknown;
  int colors = 0;
  int k = 1;
  std::optional<std::vector<int>> bad_coloring;  // indexed like Emb(A,C)
  SearchStats stats;
};

/// Independent check that `coloring` is bad: every B-copy's A-copies carry
/// at least k+1 colours. Returns an empty string when it is.
inline std::string bad_coloring_violation(const ArrowSpace& s, int r, int k, const std::vector<int>& coloring) {
  if (coloring.size() != s.a_copies.size())
    return "colouring has " + std::to_string(coloring.size()) + " entries, expected " +
           std::to_string(s.a_copies.size());
  for (std::size_t i = 0; i < coloring.size(); ++i)
    if (coloring[i] < 0 || coloring[i] >= r) return "entry " + std::to_string(i) + " is not a colour below " + std::to_string(r);
  for (std::size_t f = 0; f < s.b_copies.size(); ++f) {
    std::set<int> seen;
    for (int v : s.copy_vars[f]) seen.insert(coloring[v]);
    if (static_cast<int>(seen.size()) <= k)
      return "B-copy " + std::to_string(f) + " (" + [&] {
        std::string m;
        for (std::size_t i = 0; i < s.b_copies[f].size(); ++i) m += (i ? "," : "") + std::to_string(s.b_copies[f][i]);
        return m;
      }() + ") sees only " + std::to_string(seen.size()) + " colour(s)";
  }
  return {};
}

/// First B-copy (in Emb(B,C) order) whose A-copies carry at most k colours.
inline std::optional<std::size_t> find_good_copy(const ArrowSpace& s, const std::vector<int>& coloring, int k = 1) {
  for (std::size_t f = 0; f < s.b_copies.size(); ++f) {
    std::set<int> seen;
    for (int v : s.copy_vars[f]) seen.insert(coloring[v]);
    if (static_cast<int>(seen.size()) <= k) return f;
  }
  return std::nullopt;
}

/// Decides C -> (B)^A_{r,k}: Yes iff every r-colouring of Emb(A,C) has a
/// B-copy whose A-copies carry at most k colours. No comes with the least
/// bad colouring in lexicographic order (under the default branching).
inline ArrowVerdict degree_arrows(const ArrowSpace& s, int r, int k, const SearchOptions& opt = {}) {
  if (k < 1) throw PreconditionError("degree_arrows: k must be at least 1");
  if (r < 0) throw PreconditionError("degree_arrows: negative colour count");
  if (r == 0 && !s.a_copies.empty()) throw PreconditionError("degree_arrows: zero colours with a nonempty Emb(A,C)");
  ArrowVerdict v;
  v.colors = r;
  v.k = k;
  auto res = find_solution(arrow_problem(s, r, k, opt.symmetry_breaking), opt);
  v.stats = res.stats;
  if (res.solution) {
    v.kind = Answer::no;
    v.bad_coloring = res.solution;
  } else {
    v.kind = res.complete ? Answer::yes : Answer::unknown;
  }
  return v;
}

inline ArrowVerdict degree_arrows(const FinStructure& C, const FinStructure& B, const FinStructure& A, int r, int k,
                                  const SearchOptions& opt = {}) {
  return degree_arrows(ArrowSpace::build(A, B, C), r, k, opt);
}

inline ArrowVerdict arrows(const FinStructure& C, const FinStructure& B, const FinStructure& A, int r,
                           const SearchOptions& opt = {}) {
  return degree_arrows(C, B, A, r, 1, opt);
}

// ---------------------------------------------------------------------------
// Witness search over a class

struct WitnessResult {
  Answer kind = Answer::unknown;
  std::optional<FinStructure> C;
  ArrowVerdict verdict;
  int bound = 0;
  // Largest candidate refuted, with its bad colouring.
  std::optional<FinStructure> largest_refuted;
  std::vector<int> largest_bad_coloring;
  std::size_t candidates_tried = 0;
};

/// Scans members by size and canonical order for the first C with
/// C -> (B)^A_{r,k}. Never answers No: a bound that is too small proves nothing
/// about the class.
inline WitnessResult find_ramsey_witness(const ClassSpec& K, const FinStructure& A, const FinStructure& B, int r,
                                         int size_bound, int k = 1, const SearchOptions& opt = {}) {
  if (!embeds(A, B)) throw PreconditionError("find_ramsey_witness: A does not embed in B");
  WitnessResult w;
  w.bound = size_bound;
  for (int n = B.size(); n <= size_bound; ++n)
    for (const auto& C : K.members_of_size(n)) {
      if (!embeds(B, C)) continue;
      ++w.candidates_tried;
      auto v = degree_arrows(C, B, A, r, k, opt);
      if (v.kind == Answer::yes) {
        w.kind = Answer::yes;
        w.C = C;
        w.verdict = v;
        return w;
      }
      if (v.kind == Answer::no) {
        w.largest_refuted = C;
        w.largest_bad_coloring = *v.bad_coloring;
      }
    }
  return w;
}

// ---------------------------------------------------------------------------
// Ramsey degrees

struct DegreeBounds {
  int b_size = 3;  // largest B
  int colors = 2;  // largest r
  int c_size = 5;  // largest C
};

struct DegreeEvidence {
  FinStructure B;
  int colors = 0;
  int k = 0;                      // least k with a witness at this bound
  std::optional<FinStructure> C;  // witness for k
  // Every candidate C (<= c_size, containing B) with a bad colouring for k-1.
  std::vector<std::pair<FinStructure, std::vector<int>>> refutations;
};

struct DegreeVerdict {
  int k = 0;
  FinStructure A;  // substructure generated by the tuple
  DegreeBounds bounds;
  std::vector<DegreeEvidence> evidence;  // one per (B, r)
  std::size_t lower_index = 0;           // evidence entry attaining k

  /// "k <= K" and "k >= K" are both relative to the bounds.
  std::string summary() const {
    return "degree " + std::to_string(k) + " at bounds |B|<=" + std::to_string(bounds.b_size) +
           ", r<=" + std::to_string(bounds.colors) + ", |C|<=" + std::to_string(bounds.c_size) +
           " (<= k: witnesses found; >= k: no smaller value witnessed within the bounds)";
  }
};

/// Least k such that for every B <= b_size containing <a> and every
/// r <= colors some C <= c_size satisfies C -> (B)^<a>_{r,k}.
///
/// Copies of a tuple with repeated entries are in bijection with embeddings
/// of the substructure its entries generate, so the search runs over that
/// substructure.
inline DegreeVerdict compute_degree(const ClassSpec& K, const FinStructure& A, const Tuple& a, DegreeBounds bounds,
                                    const SearchOptions& opt = {}) {
  FinStructure gen = tuple_substructure(A, a);
  if (!K.contains(gen)) throw PreconditionError("compute_degree: the tuple does not generate a member of the class");
  DegreeVerdict dv;
  dv.A = gen;
  dv.bounds = bounds;
  std::vector<FinStructure> candidates;
  for (int n = 0; n <= bounds.c_size; ++n)
    for (auto& C : K.members_of_size(n)) candidates.push_back(std::move(C));
  for (int nb = gen.size(); nb <= bounds.b_size; ++nb)
    for (const auto& B : K.members_of_size(nb)) {
      if (!embeds(gen, B)) continue;
      for (int r = 1; r <= bounds.colors; ++r) {
        DegreeEvidence ev;
        ev.B = B;
        ev.colors = r;
        std::vector<const FinStructure*> cs;
        for (const auto& C : candidates)
          if (C.size() >= B.size() && embeds(B, C)) cs.push_back(&C);
        // Least k witnessed by some C; k = r always works once B embeds.
        std::vector<std::pair<FinStructure, std::vector<int>>> last_refuted;
        for (int k = 1; k <= std::max(r, 1); ++k) {
          std::vector<std::pair<FinStructure, std::vector<int>>> refuted;
          for (const FinStructure* C : cs) {
            auto v = degree_arrows(*C, B, gen, r, k, opt);
            if (v.kind == Answer::yes) {
              ev.C = *C;
              break;
            }
            if (v.kind == Answer::no) refuted.emplace_back(*C, *v.bad_coloring);
          }
          if (ev.C) {
            ev.k = k;
            ev.refutations = std::move(last_refuted);
            break;
          }
          last_refuted = std::move(refuted);
        }
        if (!ev.C) ev.k = 0;  // no C within c_size (B does not fit); ignored
        if (ev.C && ev.k > dv.k) {
          dv.k = ev.k;
          dv.lower_index = dv.evidence.size();
        }
        dv.evidence.push_back(std::move(ev));
      }
    }
  if (dv.k == 0) dv.k = 1;
  return dv;
}

// ---------------------------------------------------------------------------
// Joint degrees over several tuples

struct TupleDegree {
  Tuple tuple;  // points of B
  int k = 1;
};

/// Variables: for each tuple, its copies in C. Clauses: for each B-copy f,
/// some tuple i whose copies inside f(B) carry more than k_i colours.
struct JointSpace {
  FinStructure B, C;
  std::vector<TupleDegree> tuples;
  std::vector<int> offset;                             // first variable of family i
  std::vector<std::vector<std::vector<Point>>> copies;  // per family: Emb(<a_i>, C)
  std::vector<std::vector<Point>> b_copies;
  ColoringProblem problem;

  static JointSpace build(const FinStructure& B, const std::vector<TupleDegree>& tuples, const FinStructure& C,
                          int r, bool symmetries = true) {
    JointSpace s{B, C, tuples, {}, {}, embedding_maps(B, C), {}};
    s.problem.colors = r;
    int next = 0;
    std::vector<std::vector<std::vector<Point>>> in_b;  // per family: Emb(<a_i>, B) as maps
    std::vector<std::map<std::vector<Point>, int>> index(tuples.size());
    std::vector<TuplePattern> patterns;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
      if (tuples[i].k < 1) throw PreconditionError("joint degree: k must be at least 1");
      patterns.push_back(tuple_pattern(tuples[i].tuple));
      auto gen = induced_substructure(B, patterns.back().distinct).first;
      s.offset.push_back(next);
      s.copies.push_back(embedding_maps(gen, C));
      in_b.push_back(embedding_maps(gen, B));
      for (std::size_t j = 0; j < s.copies.back().size(); ++j) index[i].emplace(s.copies.back()[j], next + static_cast<int>(j));
      next += static_cast<int>(s.copies.back().size());
    }
    s.problem.num_vars = next;
    for (const auto& f : s.b_copies) {
      SpreadClause clause;
      for (std::size_t i = 0; i < tuples.size(); ++i) {
        SpreadGroup g;
        g.k = tuples[i].k;
        for (const auto& e : in_b[i]) {
          std::vector<Point> fe(e.size());
          for (std::size_t j = 0; j < e.size(); ++j) fe[j] = f[e[j]];
          g.vars.push_back(index[i].at(fe));
        }
        std::sort(g.vars.begin(), g.vars.end());
        clause.groups.push_back(std::move(g));
      }
      s.problem.clauses.push_back(std::move(clause));
    }
    if (symmetries) {
      for (const auto& alpha : automorphisms(C)) {
        bool identity = true;
        for (int p = 0; p < C.size(); ++p) identity = identity && alpha[p] == p;
        if (identity) continue;
        std::vector<int> perm(next);
        for (std::size_t i = 0; i < tuples.size(); ++i)
          for (std::size_t j = 0; j < s.copies[i].size(); ++j) {
            std::vector<Point> img(s.copies[i][j].size());
            for (std::size_t t = 0; t < img.size(); ++t) img[t] = alpha[s.copies[i][j][t]];
            perm[s.offset[i] + j] = index[i].at(img);
          }
        s.problem.symmetries.push_back(std::move(perm));
        if (s.problem.symmetries.size() >= 256) break;
      }
    }
    return s;
  }
};

struct JointResult {
  Answer kind = Answer::unknown;
  std::optional<FinStructure> C;
  std::vector<FinStructure> iterated;  // C_n, ..., C_1 from the inductive construction
  SearchStats stats;
};

/// One C such that every simultaneous colouring of the copies of each tuple
/// admits a single B-copy on which tuple i sees at most k_i colours.
///
/// Built inductively: starting from B, the last tuple's witness is found
/// first and each earlier tuple is handled with the previous witness in the
/// role of B. The final C is then re-checked against all colourings jointly.
inline JointResult joint_degree_witness(const ClassSpec& K, const FinStructure& B, const std::vector<TupleDegree>& tuples,
                                        int r, int size_bound, const SearchOptions& opt = {}) {
  JointResult res;
  FinStructure cur = B;
  for (std::size_t step = tuples.size(); step-- > 0;) {
    FinStructure gen = tuple_substructure(B, tuples[step].tuple);
    auto w = find_ramsey_witness(K, gen, cur, r, size_bound, tuples[step].k, opt);
    if (w.kind != Answer::yes) return res;
    cur = *w.C;
    res.iterated.push_back(cur);
  }
  auto space = JointSpace::build(B, tuples, cur, r, opt.symmetry_breaking);
  auto check = find_solution(space.problem, opt);
  res.stats = check.stats;
  if (!check.solution && check.complete) {
    res.kind = Answer::yes;
    res.C = cur;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Coherent bad colourings along a chain

/// Restriction of a colouring of Emb(A, big) along an inclusion small -> big.
inline std::vector<int> restrict_coloring(const ArrowSpace& small, const ArrowSpace& big,
                                          const std::vector<Point>& inclusion, const std::vector<int>& coloring) {
  std::vector<int> out(small.a_copies.size());
  for (std::size_t i = 0; i < small.a_copies.size(); ++i) {
    std::vector<Point> img(small.a_copies[i].size());
    for (std::size_t j = 0; j < img.size(); ++j) img[j] = inclusion[small.a_copies[i][j]];
    out[i] = coloring[big.index_of(img)];
  }
  return out;
}

/// All bad colourings of an arrow instance, in lexicographic order.
inline std::vector<std::vector<int>> all_bad_colorings(const ArrowSpace& s, int r, int k = 1) {
  std::vector<std::vector<int>> out;
  for_each_solution(arrow_problem(s, r, k, false), [&](const std::vector<int>& x) {
    out.push_back(x);
    return true;
  });
  return out;
}

/// One thread (c_0, c_1, ...) of bad colourings along the chain, with each
/// c_{i+1} restricting to c_i; the lexicographically least such thread.
/// Throws PreconditionError when some stage has no bad colouring.
inline std::vector<std::vector<int>> extend_bad_colorings(const FinStructure& A, const FinStructure& B, int r,
                                                          const Chain& chain, int k = 1) {
  if (auto w = chain_violation(chain); !w.empty()) throw PreconditionError("extend_bad_colorings: " + w);
  const std::size_t m = chain.stages.size();
  std::vector<ArrowSpace> spaces;
  std::vector<std::vector<std::vector<int>>> bad(m);
  for (std::size_t i = 0; i < m; ++i) {
    spaces.push_back(ArrowSpace::build(A, B, chain.stages[i]));
    bad[i] = all_bad_colorings(spaces[i], r, k);
    if (bad[i].empty())
      throw PreconditionError("extend_bad_colorings: stage " + std::to_string(i) + " has no bad colouring");
  }
  // Backward pruning: keep only colourings that extend to the top stage.
  std::vector<std::set<std::vector<int>>> alive(m);
  alive[m - 1] = {bad[m - 1].begin(), bad[m - 1].end()};
  for (std::size_t i = m - 1; i-- > 0;) {
    std::set<std::vector<int>> stage_bad(bad[i].begin(), bad[i].end());
    for (const auto& c : alive[i + 1]) {
      auto res = restrict_coloring(spaces[i], spaces[i + 1], chain.inclusions[i], c);
      if (stage_bad.count(res)) alive[i].insert(std::move(res));
    }
  }
  std::vector<std::vector<int>> thread;
  thread.push_back(*alive[0].begin());
  for (std::size_t i = 1; i < m; ++i) {
    bool found = false;
    for (const auto& c : alive[i])
      if (restrict_coloring(spaces[i - 1], spaces[i], chain.inclusions[i - 1], c) == thread.back()) {
        thread.push_back(c);
        found = true;
        break;
      }
    if (!found) throw PreconditionError("extend_bad_colorings: restriction of a bad colouring is not bad");
  }
  return thread;
}

}  // namespace sramsey
