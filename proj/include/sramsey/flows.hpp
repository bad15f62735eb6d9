#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "class_spec.hpp"
#include "embeddings.hpp"
#include "fraisse.hpp"
#include "parallel.hpp"
#include "ramsey.hpp"
#include "text_format.hpp"

namespace sramsey {

/// A class K over `sig` expanding a class K0 over `sig0` by relational symbols.
struct ExpansionPair {
  Signature sig0;
  Signature sig;
  ClassSpec K0;
  ClassSpec K;

  static ExpansionPair make(ClassSpec K0, ClassSpec K) {
    if (!K0.sig.is_subsignature_of(K.sig)) throw SignatureMismatch("expansion pair: reduct signature not contained");
    return {K0.sig, K.sig, std::move(K0), std::move(K)};
  }
  Signature extra() const { return signature_difference(sig, sig0); }
};

/// Empty string when, up to `bound`, every K-member reducts into K0 and
/// every K0-member has an expansion in K.
inline std::string expansion_pair_violation(const ExpansionPair& P, int bound) {
  for (int n = 0; n <= bound; ++n) {
    std::set<std::vector<int>> reducts;
    for (const auto& X : P.K.members_of_size(n)) {
      auto R = reduct(X, P.sig0);
      if (!P.K0.contains(R)) return "reduct of a size-" + std::to_string(n) + " member of " + P.K.name + " is not in " + P.K0.name;
      reducts.insert(canonical_key(R));
    }
    for (const auto& X0 : P.K0.members_of_size(n))
      if (!reducts.count(canonical_key(X0)))
        return "a size-" + std::to_string(n) + " member of " + P.K0.name + " has no expansion in " + P.K.name;
  }
  return {};
}

struct ExpansionCount {
  std::size_t count = 0;
  std::vector<FinStructure> expansions;  // on the universe of A0, one per Aut(A0)-orbit
};

/// Expansions of A0 in K up to isomorphism over A0.
///
/// Two expansions of A0 lie in one Aut(A0)-orbit iff they are isomorphic, so
/// the orbits correspond to the K-members whose reduct is isomorphic to A0.
/// Each is transported onto A0's universe through the canonical labellings.
inline ExpansionCount count_expansions(const FinStructure& A0, const ExpansionPair& P) {
  if (!P.K0.contains(A0)) throw PreconditionError("count_expansions: A0 is not in " + P.K0.name);
  auto a0 = canonical_form(A0);
  std::vector<Point> back(A0.size());
  for (int p = 0; p < A0.size(); ++p) back[a0.relabel[p]] = p;
  ExpansionCount out;
  for (const auto& X : P.K.members_of_size(A0.size())) {
    auto r = canonical_form(reduct(X, P.sig0));
    if (!(r.form == a0.form)) continue;
    std::vector<Point> to_a0(X.size());
    for (int x = 0; x < X.size(); ++x) to_a0[x] = back[r.relabel[x]];
    out.expansions.push_back(relabel(X, to_a0));
  }
  out.count = out.expansions.size();
  return out;
}

/// Labelled expansions of A0 in K: every assignment of the extra tables,
/// kept when the joined structure is a member. Exponential; an oracle for
/// small instances.
inline std::vector<FinStructure> labelled_expansions(const FinStructure& A0, const ExpansionPair& P) {
  const Signature extra = P.extra();
  std::vector<std::pair<int, Tuple>> atoms;
  for (std::size_t s = 0; s < extra.size(); ++s) {
    Tuple t(extra[s].arity, 0);
    if (A0.size() == 0) continue;
    while (true) {
      atoms.emplace_back(static_cast<int>(s), t);
      int i = extra[s].arity - 1;
      while (i >= 0 && ++t[i] == A0.size()) t[i--] = 0;
      if (i < 0) break;
    }
  }
  if (atoms.size() > 24) throw PreconditionError("labelled_expansions: too many atoms");
  std::vector<FinStructure> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << atoms.size()); ++mask) {
    std::vector<FinStructure::Table> tables(extra.size());
    for (std::size_t a = 0; a < atoms.size(); ++a)
      if (mask >> a & 1) tables[atoms[a].first].push_back(atoms[a].second);
    auto X = expand(A0, P.sig, tables);
    if (P.K.contains(X)) out.push_back(std::move(X));
  }
  return out;
}

struct VantheVerdict {
  Answer kind = Answer::unknown;
  std::optional<FinStructure> B0;
  int bound = 0;
};

/// First B0 in K0 (by size, then canonical order) such that every expansion
/// of A0 embeds into every expansion of B0.
inline VantheVerdict check_expansion_vanthe(const ExpansionPair& P, const FinStructure& A0, int bound) {
  auto as = count_expansions(A0, P).expansions;
  VantheVerdict v;
  v.bound = bound;
  for (int n = A0.size(); n <= bound; ++n)
    for (const auto& B0 : P.K0.members_of_size(n)) {
      if (!embeds(A0, B0)) continue;
      auto bs = count_expansions(B0, P).expansions;
      bool ok = true;
      for (const auto& a : as) {
        for (const auto& b : bs)
          if (!embeds(a, b)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok) {
        v.kind = Answer::yes;
        v.B0 = B0;
        return v;
      }
    }
  return v;
}

// ---------------------------------------------------------------------------
// Expansion properties inside a finite window

/// How "tau in Aut(M)" is read inside a window: as automorphisms of the
/// window (refused unless the window is homogeneous up to the subset size),
/// or as partial isomorphisms of the window defined on the moved set.
enum class WindowMode { automorphisms, partial_isomorphisms };
enum class ExpansionSide { right, left, two_sided };

inline const char* to_string(WindowMode m) {
  return m == WindowMode::automorphisms ? "automorphisms" : "partial-isomorphisms";
}
inline const char* to_string(ExpansionSide s) {
  switch (s) {
    case ExpansionSide::right: return "right";
    case ExpansionSide::left: return "left";
    case ExpansionSide::two_sided: return "two-sided";
  }
  return "";
}

/// Empty string when every embedding between substructures of W with at
/// most k points is the restriction of an automorphism of W.
inline std::string window_homogeneity_violation(const FinStructure& W, int k) {
  auto autos = automorphisms(W);
  for (const auto& S : subsets_by_size(W.size(), k)) {
    auto sub = induced_substructure(W, S).first;
    std::set<std::vector<Point>> restricted;
    for (const auto& alpha : autos) {
      std::vector<Point> img(S.size());
      for (std::size_t i = 0; i < S.size(); ++i) img[i] = alpha[S[i]];
      restricted.insert(std::move(img));
    }
    for (const auto& e : embedding_maps(sub, W))
      if (!restricted.count(e)) {
        std::string m;
        for (std::size_t i = 0; i < S.size(); ++i)
          m += (i ? " " : "") + std::to_string(S[i]) + "->" + std::to_string(e[i]);
        return "partial isomorphism {" + m + "} does not extend to an automorphism of the window";
      }
  }
  return {};
}

struct WindowExpansionVerdict {
  Answer kind = Answer::unknown;  // unknown: refused
  ExpansionSide side = ExpansionSide::right;
  WindowMode mode = WindowMode::automorphisms;
  int k = 0;
  std::string refusal;
  std::vector<std::pair<std::vector<Point>, std::vector<Point>>> witnesses;  // (A, B)
  std::optional<std::vector<Point>> failing;                                  // A without a B
};

namespace detail {

inline std::vector<Point> image_set(const std::vector<Point>& perm, const std::vector<Point>& S) {
  std::vector<Point> out;
  for (Point p : S) out.push_back(perm[p]);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool is_subset(const std::vector<Point>& a, const std::vector<Point>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace detail

/// The window reading of the expansion properties for (sig0, sig):
///   right:     for all s there is t with t[A] in s[B]
///   left:      for all s there is t with t[s[A]] in B
///   two-sided: for all s1, s2 there is t with t[s1[A]] in s2[B]
/// with s over Aut(W|sig0), A over subsets with at most k points and B
/// scanned by size then lexicographically. Verdicts speak about the window
/// only.
inline WindowExpansionVerdict check_window_expansion(const FinStructure& W, const Signature& sig0, ExpansionSide side,
                                                     int k, WindowMode mode = WindowMode::automorphisms,
                                                     int workers = 1) {
  WindowExpansionVerdict v;
  v.side = side;
  v.mode = mode;
  v.k = k;
  const FinStructure W0 = reduct(W, sig0);
  if (mode == WindowMode::automorphisms) {
    for (const auto* S : {&W0, &W})
      if (auto why = window_homogeneity_violation(*S, k); !why.empty()) {
        v.refusal = std::string(S == &W ? "expanded" : "reduct") + " window is not homogeneous up to size " +
                    std::to_string(k) + ": " + why;
        return v;
      }
  }
  const auto sigmas = automorphisms(W0);
  const auto taus = mode == WindowMode::automorphisms ? automorphisms(W) : std::vector<std::vector<Point>>{};
  const auto all_sets = subsets_by_size(W.size(), W.size());

  using Memo = std::map<std::pair<std::vector<Point>, std::vector<Point>>, bool>;
  // Can the set X be moved into the set Y by some tau?
  auto movable = [&](Memo& memo, const std::vector<Point>& X, const std::vector<Point>& Y) {
    auto key = std::make_pair(X, Y);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool ok = false;
    if (mode == WindowMode::automorphisms) {
      for (const auto& t : taus)
        if (detail::is_subset(detail::image_set(t, X), Y)) {
          ok = true;
          break;
        }
    } else {
      ok = embeds(induced_substructure(W, X).first, induced_substructure(W, Y).first);
    }
    memo.emplace(std::move(key), ok);
    return ok;
  };

  auto works = [&](Memo& memo, const std::vector<Point>& A, const std::vector<Point>& B) {
    if (side == ExpansionSide::right) {
      for (const auto& s : sigmas)
        if (!movable(memo, A, detail::image_set(s, B))) return false;
    } else if (side == ExpansionSide::left) {
      for (const auto& s : sigmas)
        if (!movable(memo, detail::image_set(s, A), B)) return false;
    } else {
      std::set<std::vector<Point>> a_images, b_images;
      for (const auto& s : sigmas) {
        a_images.insert(detail::image_set(s, A));
        b_images.insert(detail::image_set(s, B));
      }
      for (const auto& x : a_images)
        for (const auto& y : b_images)
          if (!movable(memo, x, y)) return false;
    }
    return true;
  };

  const auto family = subsets_by_size(W.size(), k);
  std::vector<std::optional<std::vector<Point>>> found(family.size());
  parallel_for(family.size(), workers, [&](std::size_t i) {
    Memo memo;
    for (const auto& B : all_sets)
      if (B.size() >= family[i].size() && works(memo, family[i], B)) {
        found[i] = B;
        break;
      }
  });
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!found[i]) {
      v.kind = Answer::no;
      v.failing = family[i];
      return v;
    }
    v.witnesses.emplace_back(family[i], *found[i]);
  }
  v.kind = Answer::yes;
  return v;
}

inline WindowExpansionVerdict check_right_expansion(const FinStructure& W, const Signature& sig0, int k,
                                                    WindowMode mode = WindowMode::automorphisms) {
  return check_window_expansion(W, sig0, ExpansionSide::right, k, mode);
}
inline WindowExpansionVerdict check_left_expansion(const FinStructure& W, const Signature& sig0, int k,
                                                   WindowMode mode = WindowMode::automorphisms) {
  return check_window_expansion(W, sig0, ExpansionSide::left, k, mode);
}
inline WindowExpansionVerdict check_two_sided_expansion(const FinStructure& W, const Signature& sig0, int k,
                                                        WindowMode mode = WindowMode::automorphisms) {
  return check_window_expansion(W, sig0, ExpansionSide::two_sided, k, mode);
}

// ---------------------------------------------------------------------------
// Orbit closure of the designated expansion at a finite level

/// The reduct window on {0..n-1} and the distinct restrictions to it of the
/// Aut(W|sig0)-translates of the extra relations of W.
struct FlowWindow {
  FinStructure window;             // over sig0
  std::vector<FinStructure> points;  // over sig minus sig0, on {0..n-1}, sorted
};

namespace detail {

// Extra relations of W pulled back along the permutation s, restricted to
// {0..n-1}: t is in the result iff s(t) is in W.
inline FinStructure translate_restrict(const FinStructure& W, const Signature& extra, const std::vector<Point>& s,
                                       int n) {
  std::vector<FinStructure::Table> tables(extra.size());
  for (std::size_t e = 0; e < extra.size(); ++e) {
    const int sym = W.signature().index_of(extra[e].name);
    std::vector<Point> inverse(W.size());
    for (int p = 0; p < W.size(); ++p) inverse[s[p]] = p;
    for (const auto& t : W.table(sym)) {
      Tuple u(t.size());
      bool inside = true;
      for (std::size_t i = 0; i < t.size(); ++i) {
        u[i] = inverse[t[i]];
        inside = inside && u[i] < n;
      }
      if (inside) tables[e].push_back(std::move(u));
    }
  }
  return FinStructure(extra, n, std::move(tables));
}

}  // namespace detail

/// Level n of cl(R . Aut(W0)) inside the window W: a finite set, so the
/// closure adds nothing at this level.
inline FlowWindow minimal_flow_window(const FinStructure& W, const Signature& sig0, int n, int workers = 1) {
  if (n < 0 || n > W.size()) throw PreconditionError("minimal_flow_window: level exceeds the window size");
  const Signature extra = signature_difference(W.signature(), sig0);
  const FinStructure W0 = reduct(W, sig0);
  std::vector<Point> first(n);
  for (int i = 0; i < n; ++i) first[i] = i;
  FlowWindow fw{induced_substructure(W0, first).first, {}};
  const auto sigmas = automorphisms(W0);
  std::vector<FinStructure> images(sigmas.size());
  parallel_for(sigmas.size(), workers,
               [&](std::size_t i) { images[i] = detail::translate_restrict(W, extra, sigmas[i], n); });
  std::map<std::vector<std::vector<Tuple>>, FinStructure> unique;
  for (auto& X : images) unique.emplace(X.tables(), std::move(X));
  for (auto& [key, X] : unique) fw.points.push_back(std::move(X));
  return fw;
}

/// Restriction of every point of a flow window to {0..m-1}.
inline std::vector<FinStructure> restrict_flow_points(const FlowWindow& fw, int m) {
  std::vector<Point> first(m);
  for (int i = 0; i < m; ++i) first[i] = i;
  std::map<std::vector<std::vector<Tuple>>, FinStructure> unique;
  for (const auto& X : fw.points) {
    auto Y = induced_substructure(X, first).first;
    unique.emplace(Y.tables(), Y);
  }
  std::vector<FinStructure> out;
  for (auto& [k, Y] : unique) out.push_back(std::move(Y));
  return out;
}

inline void write_flow_window(std::ostream& out, const FlowWindow& fw) {
  out << "window " << fw.window.size() << "\n";
  text::write_structure(out, "reduct", fw.window);
  for (std::size_t i = 0; i < fw.points.size(); ++i) text::write_structure(out, "point" + std::to_string(i), fw.points[i]);
}

// ---------------------------------------------------------------------------
// Degree report

struct DegreeReportEntry {
  FinStructure A;  // generated by the tuple 0..|A|-1
  DegreeVerdict at_bounds;
  DegreeVerdict at_smaller_bounds;
  bool growth = false;  // k rose when the bounds were raised
};

/// compute_degree for every member of K with at most `tuple_bound` points,
/// enumerated injectively, at the given bounds and at c_size - 1. Reports
/// finite degrees observed within bounds only.
inline std::vector<DegreeReportEntry> metrizability_indicator(const ClassSpec& K, int tuple_bound, DegreeBounds bounds,
                                                              const SearchOptions& opt = {}) {
  std::vector<DegreeReportEntry> out;
  for (int n = 1; n <= tuple_bound; ++n)
    for (const auto& A : K.members_of_size(n)) {
      Tuple a(n);
      for (int i = 0; i < n; ++i) a[i] = i;
      DegreeBounds smaller = bounds;
      smaller.c_size = std::max(bounds.b_size, bounds.c_size - 1);
      DegreeReportEntry e{A, compute_degree(K, A, a, bounds, opt), compute_degree(K, A, a, smaller, opt), false};
      e.growth = e.at_bounds.k > e.at_smaller_bounds.k;
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace sramsey
