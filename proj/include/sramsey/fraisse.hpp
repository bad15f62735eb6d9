#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "class_spec.hpp"
#include "embeddings.hpp"
#include "parallel.hpp"

namespace sramsey {

/// Subsets of {0..n-1} ordered by size, then lexicographically.
inline std::vector<std::vector<Point>> subsets_by_size(int n, int max_size) {
  std::vector<std::vector<Point>> out;
  for (int k = 0; k <= std::min(n, max_size); ++k) {
    std::vector<Point> s(k);
    for (int i = 0; i < k; ++i) s[i] = i;
    while (true) {
      out.push_back(s);
      int i = k - 1;
      while (i >= 0 && s[i] == n - k + i) --i;
      if (i < 0) break;
      ++s[i];
      for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hereditary property

struct HpVerdict {
  bool holds = true;
  int bound = 0;
  std::optional<FinStructure> member;  // B
  std::vector<Point> subset;           // induced substructure of B that is not a member
};

inline HpVerdict check_hp(const ClassSpec& K) {
  HpVerdict v;
  v.bound = K.size_bound;
  for (const auto& B : K.members_up_to(K.size_bound))
    for (const auto& sub : subsets_by_size(B.size(), B.size()))
      if (!K.member(induced_substructure(B, sub).first)) {
        v.holds = false;
        v.member = B;
        v.subset = sub;
        return v;
      }
  return v;
}

// ---------------------------------------------------------------------------
// Amalgamation

struct Amalgam {
  FinStructure C;
  std::vector<Point> g1, g2;  // B1 -> C, B2 -> C
  std::string strategy;       // "free" or "search"
};

struct AmalgamResult {
  std::optional<Amalgam> amalgam;
  int bound_reached = 0;  // largest candidate size examined
};

struct AmalgamOptions {
  int search_bound = -1;  // < 0: |B1| + |B2| - |A|
};

/// Re-checks an amalgam: both maps are embeddings into a member and the
/// square commutes. Returns an empty string on success.
inline std::string amalgam_violation(const FinStructure& A, const FinStructure& B1, const FinStructure& B2,
                                     const std::vector<Point>& f1, const std::vector<Point>& f2,
                                     const Amalgam& am, const ClassSpec* K) {
  if (auto w = embedding_violation(A, B1, f1); !w.empty()) return "f1: " + w;
  if (auto w = embedding_violation(A, B2, f2); !w.empty()) return "f2: " + w;
  if (auto w = embedding_violation(B1, am.C, am.g1); !w.empty()) return "g1: " + w;
  if (auto w = embedding_violation(B2, am.C, am.g2); !w.empty()) return "g2: " + w;
  for (int a = 0; a < A.size(); ++a)
    if (am.g1[f1[a]] != am.g2[f2[a]]) return "square does not commute at point " + std::to_string(a);
  if (K != nullptr && !K->member(am.C)) return "amalgam is not a member of the class";
  return {};
}

/// B1 and B2 glued along the images of A, with no further relations.
inline Amalgam free_amalgam(const FinStructure& A, const FinStructure& B1, const FinStructure& B2,
                            const std::vector<Point>& f1, const std::vector<Point>& f2) {
  std::vector<Point> g2(B2.size(), -1);
  for (int a = 0; a < A.size(); ++a) g2[f2[a]] = f1[a];
  int next = B1.size();
  for (auto& p : g2)
    if (p < 0) p = next++;
  std::vector<FinStructure::Table> tables(B1.signature().size());
  for (std::size_t s = 0; s < tables.size(); ++s) {
    std::set<Tuple> rows(B1.table(s).begin(), B1.table(s).end());
    for (const auto& t : B2.table(s)) {
      Tuple u(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) u[i] = g2[t[i]];
      rows.insert(std::move(u));
    }
    tables[s].assign(rows.begin(), rows.end());
  }
  std::vector<Point> g1(B1.size());
  for (int i = 0; i < B1.size(); ++i) g1[i] = i;
  return {FinStructure(B1.signature(), next, std::move(tables)), std::move(g1), std::move(g2), "free"};
}

/// Amalgam of the span f1: A -> B1, f2: A -> B2 inside K.
///
/// The free amalgam is tried first. Otherwise members are scanned by size
/// and canonical order, and the first (C, g1, g2) in lexicographic order of
/// the maps is returned.
inline AmalgamResult amalgamate(const FinStructure& A, const FinStructure& B1, const FinStructure& B2,
                                const std::vector<Point>& f1, const std::vector<Point>& f2,
                                const ClassSpec& K, AmalgamOptions opt = {}) {
  if (!(A.signature() == K.sig && B1.signature() == K.sig && B2.signature() == K.sig))
    throw SignatureMismatch("amalgamate: signatures differ");
  AmalgamResult res;
  auto free = free_amalgam(A, B1, B2, f1, f2);
  if (amalgam_violation(A, B1, B2, f1, f2, free, &K).empty()) {
    res.amalgam = std::move(free);
    res.bound_reached = res.amalgam->C.size();
    return res;
  }
  const int bound = opt.search_bound >= 0 ? opt.search_bound : B1.size() + B2.size() - A.size();
  if (!K.has_generator()) return res;
  for (int s = std::max(B1.size(), B2.size()); s <= bound; ++s) {
    res.bound_reached = s;
    for (const auto& C : K.members_of_size(s)) {
      auto g1s = embedding_maps(B1, C);
      if (g1s.empty()) continue;
      auto g2s = embedding_maps(B2, C);
      for (const auto& g1 : g1s)
        for (const auto& g2 : g2s) {
          bool commutes = true;
          for (int a = 0; a < A.size() && commutes; ++a) commutes = g1[f1[a]] == g2[f2[a]];
          if (commutes) {
            res.amalgam = Amalgam{C, g1, g2, "search"};
            return res;
          }
        }
    }
  }
  return res;
}

struct Span {
  FinStructure A, B1, B2;
  std::vector<Point> f1, f2;
};

struct ApVerdict {
  bool holds = true;
  int bound = 0;
  std::size_t spans_checked = 0;
  std::optional<Span> failing_span;
  int search_bound_reached = 0;
};

/// Every span with |A|, |B1|, |B2| <= bound, up to automorphisms of B1.
inline std::vector<Span> spans_up_to(const ClassSpec& K, int bound) {
  std::vector<Span> spans;
  auto members = K.members_up_to(bound);
  for (const auto& A : members)
    for (const auto& B1 : members) {
      if (B1.size() < A.size()) continue;
      auto f1s = embedding_maps(A, B1);
      if (f1s.empty()) continue;
      // One f1 per orbit of Aut(B1) acting by post-composition.
      auto aut = automorphisms(B1);
      std::set<std::vector<Point>> seen;
      std::vector<std::vector<Point>> reps;
      for (const auto& f : f1s) {
        if (seen.count(f)) continue;
        reps.push_back(f);
        for (const auto& sigma : aut) {
          std::vector<Point> g(f.size());
          for (std::size_t i = 0; i < f.size(); ++i) g[i] = sigma[f[i]];
          seen.insert(std::move(g));
        }
      }
      for (const auto& B2 : members) {
        if (B2.size() < A.size()) continue;
        auto f2s = embedding_maps(A, B2);
        for (const auto& f1 : reps)
          for (const auto& f2 : f2s) spans.push_back({A, B1, B2, f1, f2});
      }
    }
  return spans;
}

inline ApVerdict check_ap(const ClassSpec& K, int workers = 1, int bound = -1) {
  ApVerdict v;
  v.bound = bound >= 0 ? bound : K.size_bound;
  auto spans = spans_up_to(K, v.bound);
  v.spans_checked = spans.size();
  std::vector<int> reached(spans.size(), 0);
  auto first = parallel_find_first(spans.size(), workers, [&](std::size_t i) {
    const auto& sp = spans[i];
    auto r = amalgamate(sp.A, sp.B1, sp.B2, sp.f1, sp.f2, K);
    reached[i] = r.bound_reached;
    return !r.amalgam.has_value();
  });
  if (first < spans.size()) {
    v.holds = false;
    v.failing_span = spans[first];
    v.search_bound_reached = reached[first];
  }
  return v;
}

// ---------------------------------------------------------------------------
// Joint embedding

struct JepVerdict {
  bool holds = true;
  int bound = 0;
  std::optional<FinStructure> A, B;  // stuck pair
  int search_bound_reached = 0;
};

/// A member embedding both A and B (amalgamation over the empty structure).
inline AmalgamResult joint_embedding(const FinStructure& A, const FinStructure& B, const ClassSpec& K,
                                     AmalgamOptions opt = {}) {
  FinStructure empty(K.sig, 0);
  return amalgamate(empty, A, B, {}, {}, K, opt);
}

inline JepVerdict check_jep(const ClassSpec& K, int workers = 1) {
  JepVerdict v;
  v.bound = K.size_bound;
  auto members = K.members_up_to(K.size_bound);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i; j < members.size(); ++j) pairs.emplace_back(i, j);
  std::vector<int> reached(pairs.size(), 0);
  auto first = parallel_find_first(pairs.size(), workers, [&](std::size_t p) {
    auto r = joint_embedding(members[pairs[p].first], members[pairs[p].second], K);
    reached[p] = r.bound_reached;
    return !r.amalgam.has_value();
  });
  if (first < pairs.size()) {
    v.holds = false;
    v.A = members[pairs[first].first];
    v.B = members[pairs[first].second];
    v.search_bound_reached = reached[first];
  }
  return v;
}

// ---------------------------------------------------------------------------
// Extension property and limit approximants

struct ExtensionRequest {
  std::vector<Point> subset;     // points of the window, sorted
  FinStructure extension;        // member of size |subset| + 1
  std::vector<Point> embedding;  // <subset> -> extension
};

struct ExtensionVerdict {
  bool holds = true;
  std::optional<ExtensionRequest> missing;
};

/// One-point extension requests over `subset` of M, in canonical order.
inline std::vector<ExtensionRequest> extension_requests(const FinStructure& M, const std::vector<Point>& subset,
                                                        const ClassSpec& K) {
  std::vector<ExtensionRequest> out;
  auto sub = induced_substructure(M, subset).first;
  for (const auto& ext : K.members_of_size(static_cast<int>(subset.size()) + 1))
    for (auto& e : embedding_maps(sub, ext)) out.push_back({subset, ext, std::move(e)});
  return out;
}

inline bool request_satisfied(const FinStructure& M, const ExtensionRequest& req) {
  bool found = false;
  for_each_embedding(req.extension, M, [&](const std::vector<Point>& h) {
    for (std::size_t i = 0; i < req.subset.size(); ++i)
      if (h[req.embedding[i]] != req.subset[i]) return true;
    found = true;
    return false;
  });
  return found;
}

/// For every A <= M on at most k points (drawn from `domain`, default all of
/// M) and every one-point extension A' in K, some embedding of A' into M
/// extends the inclusion of A.
inline ExtensionVerdict check_extension_property(const FinStructure& M, const ClassSpec& K, int k,
                                                 std::optional<std::vector<Point>> domain = std::nullopt) {
  std::vector<Point> dom;
  if (domain) {
    dom = *domain;
    std::sort(dom.begin(), dom.end());
  } else {
    for (int i = 0; i < M.size(); ++i) dom.push_back(i);
  }
  ExtensionVerdict v;
  for (const auto& idx : subsets_by_size(static_cast<int>(dom.size()), k)) {
    std::vector<Point> subset;
    for (Point i : idx) subset.push_back(dom[i]);
    for (auto& req : extension_requests(M, subset, K))
      if (!request_satisfied(M, req)) {
        v.holds = false;
        v.missing = std::move(req);
        return v;
      }
  }
  return v;
}

struct Chain {
  std::vector<FinStructure> stages;
  std::vector<std::vector<Point>> inclusions;  // stage i -> stage i+1

  /// Composite inclusion stage i -> stage j (i <= j).
  std::vector<Point> composite(std::size_t i, std::size_t j) const {
    std::vector<Point> m(stages[i].size());
    for (int p = 0; p < stages[i].size(); ++p) m[p] = p;
    for (std::size_t s = i; s < j; ++s)
      for (auto& p : m) p = inclusions[s][p];
    return m;
  }
};

class AmalgamationFailure : public Error {
public:
  using Error::Error;
};

/// Re-checks that consecutive inclusions are embeddings.
inline std::string chain_violation(const Chain& ch) {
  if (ch.inclusions.size() + 1 != ch.stages.size() && !(ch.stages.empty() && ch.inclusions.empty()))
    return "inclusion count must be one less than stage count";
  for (std::size_t i = 0; i < ch.inclusions.size(); ++i)
    if (auto w = embedding_violation(ch.stages[i], ch.stages[i + 1], ch.inclusions[i]); !w.empty())
      return "inclusion " + std::to_string(i) + ": " + w;
  return {};
}

/// Chain of members where stage i+1 realises every one-point extension over
/// every subset of (the image of) stage i with at most `horizon` points.
/// Requests are handled round-robin in canonical order; each unsatisfied
/// request is resolved by amalgamating the current structure with the
/// requested extension.
inline Chain build_limit_approximant(const ClassSpec& K, int steps, int horizon,
                                     std::optional<FinStructure> start = std::nullopt) {
  Chain ch;
  if (!start) {
    auto ones = K.members_of_size(1);
    if (ones.empty()) throw PreconditionError("build_limit_approximant: class has no one-point member");
    start = ones.front();
  }
  if (!K.member(*start)) throw PreconditionError("build_limit_approximant: start is not a member");
  ch.stages.push_back(*start);
  for (int step = 0; step < steps; ++step) {
    const FinStructure& prev = ch.stages.back();
    FinStructure cur = prev;
    std::vector<Point> into(prev.size());
    for (int i = 0; i < prev.size(); ++i) into[i] = i;
    for (const auto& subset : subsets_by_size(prev.size(), horizon)) {
      for (auto req : extension_requests(prev, subset, K)) {
        for (auto& p : req.subset) p = into[p];
        if (request_satisfied(cur, req)) continue;
        auto [sub, incl] = induced_substructure(cur, req.subset);
        auto r = amalgamate(sub, cur, req.extension, incl.map(), req.embedding, K);
        if (!r.amalgam)
          throw AmalgamationFailure("build_limit_approximant: no amalgam within bound " +
                                    std::to_string(r.bound_reached) + " at step " + std::to_string(step));
        for (auto& p : into) p = r.amalgam->g1[p];
        cur = r.amalgam->C;
      }
    }
    ch.stages.push_back(cur);
    ch.inclusions.push_back(into);
  }
  return ch;
}

// ---------------------------------------------------------------------------
// Cofinal families

enum class CofinalKind { all_subsets, initial_segments, even_sized };

/// Supports (sorted point sets) of a family of subsets of the window.
inline std::vector<std::vector<Point>> cofinal_family(const FinStructure& window, CofinalKind kind) {
  std::vector<std::vector<Point>> out;
  const int n = window.size();
  switch (kind) {
    case CofinalKind::all_subsets:
      return subsets_by_size(n, n);
    case CofinalKind::initial_segments:
      for (int k = 0; k <= n; ++k) {
        std::vector<Point> s(k);
        for (int i = 0; i < k; ++i) s[i] = i;
        out.push_back(std::move(s));
      }
      return out;
    case CofinalKind::even_sized:
      for (auto& s : subsets_by_size(n, n))
        if (s.size() % 2 == 0) out.push_back(std::move(s));
      return out;
  }
  return out;
}

/// Every subset of the window with at most `bound` points lies inside a
/// member of the family.
inline bool is_cofinal(const std::vector<std::vector<Point>>& family, int window_size, int bound) {
  for (const auto& s : subsets_by_size(window_size, bound)) {
    bool covered = false;
    for (const auto& f : family)
      if (std::includes(f.begin(), f.end(), s.begin(), s.end())) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

}  // namespace sramsey
