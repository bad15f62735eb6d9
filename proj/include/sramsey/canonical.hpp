#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "structure.hpp"

namespace sramsey {

struct CanonicalForm {
  FinStructure form;
  std::vector<Point> relabel;  // relabel[p] is the position of p in `form`
};

namespace detail {

// Flattened relabelled tables; comparing these lexicographically orders
// labellings of one structure.
inline std::vector<int> certificate_of(const FinStructure& S, const std::vector<Point>& perm) {
  std::vector<int> cert;
  cert.push_back(S.size());
  std::vector<Tuple> rows;
  for (std::size_t s = 0; s < S.signature().size(); ++s) {
    rows.clear();
    for (const auto& t : S.table(s)) {
      Tuple u(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) u[i] = perm[t[i]];
      rows.push_back(std::move(u));
    }
    std::sort(rows.begin(), rows.end());
    cert.push_back(static_cast<int>(rows.size()));
    for (const auto& r : rows) cert.insert(cert.end(), r.begin(), r.end());
  }
  return cert;
}

class CanonicalSearch {
public:
  explicit CanonicalSearch(const FinStructure& S) : S_(S), n_(S.size()) {
    incident_.resize(n_);
    for (std::size_t s = 0; s < S.signature().size(); ++s)
      for (std::size_t t = 0; t < S.table(s).size(); ++t) {
        const auto& tup = S.table(s)[t];
        for (std::size_t i = 0; i < tup.size(); ++i)
          if (std::find(tup.begin(), tup.begin() + i, tup[i]) == tup.begin() + i)
            incident_[tup[i]].push_back({static_cast<int>(s), static_cast<int>(t)});
      }
    twin_class_.resize(n_);
    for (int v = 0; v < n_; ++v) {
      twin_class_[v] = v;
      for (int u = 0; u < v; ++u)
        if (twin_class_[u] == u && transposition_is_automorphism(u, v)) {
          twin_class_[v] = u;
          break;
        }
    }
  }

  CanonicalForm run() {
    std::vector<int> colors(n_, 0);
    refine(colors);
    search(colors);
    std::vector<Point> perm = best_perm_;
    if (n_ == 0) perm.clear();
    return {relabel(S_, perm), perm};
  }

private:
  struct Incidence {
    int symbol, tuple;
  };

  bool transposition_is_automorphism(int u, int v) const {
    auto swap_pt = [&](Point p) { return p == u ? v : (p == v ? u : p); };
    for (int w : {u, v})
      for (auto [s, t] : incident_[w]) {
        Tuple img = S_.table(s)[t];
        for (auto& p : img) p = swap_pt(p);
        if (!S_.holds(s, img)) return false;
      }
    return true;
  }

  // Iterated colour refinement. Colours are ranks, so the resulting
  // ordered partition is a canonical function of the input colouring.
  void refine(std::vector<int>& colors) const {
    int classes = count_classes(colors);
    while (true) {
      std::vector<std::pair<std::pair<int, std::vector<std::vector<int>>>, int>> keyed(n_);
      for (int v = 0; v < n_; ++v) {
        std::vector<std::vector<int>> inv;
        for (auto [s, t] : incident_[v]) {
          const auto& tup = S_.table(s)[t];
          std::vector<int> row;
          row.reserve(2 * tup.size() + 1);
          row.push_back(s);
          for (Point p : tup) row.push_back(p == v ? -1 : colors[p]);
          inv.push_back(std::move(row));
        }
        std::sort(inv.begin(), inv.end());
        keyed[v] = {{colors[v], std::move(inv)}, v};
      }
      std::vector<int> order(n_);
      for (int v = 0; v < n_; ++v) order[v] = v;
      std::sort(order.begin(), order.end(),
                [&](int a, int b) { return keyed[a].first < keyed[b].first; });
      std::vector<int> next(n_);
      int rank = 0;
      for (int i = 0; i < n_; ++i) {
        if (i > 0 && keyed[order[i]].first != keyed[order[i - 1]].first) rank = i;
        next[order[i]] = rank;
      }
      int next_classes = count_classes(next);
      colors = std::move(next);
      if (next_classes == classes) break;
      classes = next_classes;
    }
  }

  static int count_classes(const std::vector<int>& colors) {
    std::vector<int> c = colors;
    std::sort(c.begin(), c.end());
    return static_cast<int>(std::unique(c.begin(), c.end()) - c.begin());
  }

  void search(const std::vector<int>& colors) {
    // Colours are ranks in [0, n); a cell of colour c with m members spans c..c+m-1.
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < n_; ++v) cells[colors[v]].push_back(v);
    const std::vector<int>* target = nullptr;
    for (const auto& [c, members] : cells)
      if (members.size() > 1) {
        target = &members;
        break;
      }
    if (target == nullptr) {
      std::vector<Point> perm(colors.begin(), colors.end());
      auto cert = certificate_of(S_, perm);
      if (!have_best_ || cert < best_cert_) {
        best_cert_ = std::move(cert);
        best_perm_ = std::move(perm);
        have_best_ = true;
      }
      return;
    }
    std::vector<int> members = *target;
    std::vector<char> tried_class(n_, 0);
    for (int v : members) {
      if (tried_class[twin_class_[v]]) continue;
      tried_class[twin_class_[v]] = 1;
      std::vector<int> child = colors;
      for (int u : members)
        if (u != v) child[u] = colors[u] + 1;
      refine(child);
      search(child);
    }
  }

  const FinStructure& S_;
  int n_;
  std::vector<std::vector<Incidence>> incident_;
  std::vector<int> twin_class_;
  std::vector<int> best_cert_;
  std::vector<Point> best_perm_;
  bool have_best_ = false;
};

}  // namespace detail

/// Canonical labelling: isomorphic inputs map to identical outputs.
///
/// Colour refinement followed by an individualisation search that keeps the
/// lexicographically least relabelled table set. Branches on vertices whose
/// transposition is an automorphism are skipped since they yield identical
/// leaves.
inline CanonicalForm canonical_form(const FinStructure& S) {
  return detail::CanonicalSearch(S).run();
}

/// Isomorphism-class key; equal keys iff isomorphic (for a fixed signature).
inline std::vector<int> canonical_key(const FinStructure& S) {
  auto cf = canonical_form(S);
  return detail::certificate_of(cf.form, [&] {
    std::vector<Point> id(S.size());
    for (int i = 0; i < S.size(); ++i) id[i] = i;
    return id;
  }());
}

inline bool isomorphic(const FinStructure& a, const FinStructure& b) {
  if (!(a.signature() == b.signature()) || a.size() != b.size()) return false;
  return canonical_form(a).form == canonical_form(b).form;
}

}  // namespace sramsey
