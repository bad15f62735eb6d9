#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "class_spec.hpp"
#include "text_format.hpp"

namespace sramsey::catalog {

inline Signature order_sig() { return Signature({{"<", 2}}); }
inline Signature graph_sig() { return Signature({{"edge", 2}}); }
inline Signature ordered_graph_sig() { return Signature({{"edge", 2}, {"<", 2}}); }
inline Signature arc_sig() { return Signature({{"arc", 2}}); }

inline FinStructure pure_set(int n) { return FinStructure(Signature{}, n); }

/// The n-chain 0 < 1 < ... < n-1.
inline FinStructure chain(int n) {
  FinStructure::Table lt;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) lt.push_back({i, j});
  return FinStructure(order_sig(), n, {lt});
}

inline FinStructure graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  FinStructure::Table t;
  for (auto [u, v] : edges) {
    t.push_back({u, v});
    t.push_back({v, u});
  }
  return FinStructure(graph_sig(), n, {t});
}

inline FinStructure complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return graph_from_edges(n, e);
}

inline FinStructure edgeless_graph(int n) { return graph_from_edges(n, {}); }

inline FinStructure path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return graph_from_edges(n, e);
}

inline FinStructure cycle_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return graph_from_edges(n, e);
}

/// Graph `g` with its points ordered naturally.
inline FinStructure with_natural_order(const FinStructure& g) {
  return expand(g, ordered_graph_sig(), {chain(g.size()).table(0)});
}

// Predicates on a single binary relation.

inline bool irreflexive(const FinStructure& S, std::size_t s) {
  for (const auto& t : S.table(s))
    if (t[0] == t[1]) return false;
  return true;
}

inline bool symmetric(const FinStructure& S, std::size_t s) {
  for (const auto& t : S.table(s))
    if (!S.holds(s, Tuple{t[1], t[0]})) return false;
  return true;
}

inline bool is_linear_order(const FinStructure& S, std::size_t s) {
  const int n = S.size();
  if (S.table(s).size() != static_cast<std::size_t>(n) * (n - 1) / 2 || !irreflexive(S, s)) return false;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      bool ab = S.holds(s, Tuple{a, b}), ba = S.holds(s, Tuple{b, a});
      if (ab == ba) return false;
      if (!ab) continue;
      for (int c = 0; c < n; ++c)
        if (S.holds(s, Tuple{b, c}) && !S.holds(s, Tuple{a, c})) return false;
    }
  return true;
}

inline bool is_graph(const FinStructure& S, std::size_t s = 0) { return irreflexive(S, s) && symmetric(S, s); }

inline bool is_connected_graph(const FinStructure& S) {
  if (!is_graph(S)) return false;
  const int n = S.size();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u = 0; u < n; ++u)
      if (!seen[u] && S.holds(0, Tuple{v, u})) {
        seen[u] = 1;
        stack.push_back(u);
      }
  }
  return std::count(seen.begin(), seen.end(), 1) == n;
}

inline bool is_tournament(const FinStructure& S) {
  const int n = S.size();
  if (!irreflexive(S, 0)) return false;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (S.holds(0, Tuple{a, b}) == S.holds(0, Tuple{b, a})) return false;
  return true;
}

// Built-in classes.

inline ClassSpec set_class(int bound = 6) {
  ClassSpec K{"set", Signature{}, [](const FinStructure&) { return true; }, bound, {}};
  K.generator = [](int n) { return n < 0 ? std::vector<FinStructure>{} : std::vector<FinStructure>{pure_set(n)}; };
  return K;
}

inline ClassSpec linorder_class(int bound = 7) {
  ClassSpec K{"linorder", order_sig(), [](const FinStructure& S) { return is_linear_order(S, 0); }, bound, {}};
  K.generator = [](int n) {
    return n < 0 ? std::vector<FinStructure>{} : std::vector<FinStructure>{canonical_form(chain(n)).form};
  };
  return K;
}

inline ClassSpec graph_class(int bound = 6) {
  ClassSpec K{"graph", graph_sig(), [](const FinStructure& S) { return is_graph(S); }, bound, {}};
  K.generator = augmenting_generator(K.sig, K.member);
  return K;
}

inline ClassSpec ordered_graph_class(int bound = 5) {
  ClassSpec K{"ordered_graph", ordered_graph_sig(),
              [](const FinStructure& S) { return is_graph(S, 0) && is_linear_order(S, 1); }, bound, {}};
  // Ordered graphs are rigid: one labelled graph on the natural order per type.
  K.generator = detail::memoize([](int n) {
    std::vector<FinStructure> all;
    if (n < 0) return all;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    if (pairs.size() > 20) throw PreconditionError("ordered_graph generator: size too large");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      std::vector<std::pair<int, int>> e;
      for (std::size_t k = 0; k < pairs.size(); ++k)
        if (mask >> k & 1) e.push_back(pairs[k]);
      all.push_back(with_natural_order(graph_from_edges(n, e)));
    }
    return detail::canonical_sorted(std::move(all));
  });
  return K;
}

inline ClassSpec digraph_class(int bound = 5) {
  ClassSpec K{"digraph", arc_sig(), [](const FinStructure& S) { return irreflexive(S, 0); }, bound, {}};
  K.generator = augmenting_generator(K.sig, K.member);
  return K;
}

inline ClassSpec tournament_class(int bound = 5) {
  ClassSpec K{"tournament", arc_sig(), [](const FinStructure& S) { return is_tournament(S); }, bound, {}};
  K.generator = augmenting_generator(K.sig, K.member);
  return K;
}

/// Fixture: graphs with an even number of vertices (not hereditary).
inline ClassSpec even_graph_class(int bound = 5) {
  auto base = graph_class(bound);
  ClassSpec K{"even_graph", graph_sig(),
              [](const FinStructure& S) { return is_graph(S) && S.size() % 2 == 0; }, bound, {}};
  K.generator = filtered_generator(base.generator, [](const FinStructure& S) { return S.size() % 2 == 0; });
  return K;
}

/// Fixture: connected graphs (not hereditary).
inline ClassSpec connected_graph_class(int bound = 5) {
  auto base = graph_class(bound);
  ClassSpec K{"connected_graph", graph_sig(), [](const FinStructure& S) { return is_connected_graph(S); },
              bound, {}};
  K.generator = filtered_generator(base.generator, [](const FinStructure& S) { return is_connected_graph(S); });
  return K;
}

/// Class consisting of the listed structures up to isomorphism.
inline ClassSpec explicit_class(std::string name, Signature sig, const std::vector<FinStructure>& members,
                                int bound) {
  std::map<int, std::vector<FinStructure>> by_size;
  std::set<std::vector<int>> keys;
  for (const auto& m : members) {
    if (!(m.signature() == sig)) throw SignatureMismatch("explicit_class: member of another signature");
    by_size[m.size()].push_back(m);
    keys.insert(canonical_key(m));
  }
  for (auto& [n, level] : by_size) level = detail::canonical_sorted(level);
  ClassSpec K{std::move(name), std::move(sig),
              [keys](const FinStructure& S) { return keys.count(canonical_key(S)) > 0; }, bound, {}};
  K.generator = [by_size](int n) {
    auto it = by_size.find(n);
    return it == by_size.end() ? std::vector<FinStructure>{} : it->second;
  };
  return K;
}

/// The three-member catalog on which amalgamation fails: a plain point, a
/// plain point next to a P-point, and a plain point next to a Q-point.
/// No member contains both a P-point and a Q-point, so the span of the plain
/// point into the two 2-point members has no amalgam.
inline const char* ap_fail_fixture_text() {
  return "structure plain\n"
         "signature P/1 Q/1\n"
         "size 1\n"
         "end\n"
         "structure with_p\n"
         "signature P/1 Q/1\n"
         "size 2\n"
         "P 1\n"
         "end\n"
         "structure with_q\n"
         "signature P/1 Q/1\n"
         "size 2\n"
         "Q 1\n"
         "end\n";
}

inline ClassSpec ap_fail_fixture_class(int bound = 3) {
  std::istringstream in(ap_fail_fixture_text());
  std::vector<FinStructure> members;
  for (auto& ns : text::read_structures(in)) members.push_back(ns.structure);
  return explicit_class("ap_fail_fixture", members.front().signature(), members, bound);
}

/// Forbidden-substructure class: A is a member iff no listed F embeds in A.
inline ClassSpec forbidden_class(std::string name, Signature sig, std::vector<FinStructure> forbidden,
                                 int bound = 5) {
  for (const auto& F : forbidden)
    if (!(F.signature() == sig)) throw SignatureMismatch("forbidden structure of another signature");
  ClassSpec K{std::move(name), sig,
              [forbidden](const FinStructure& S) {
                for (const auto& F : forbidden)
                  if (embeds(F, S)) return false;
                return true;
              },
              bound, {}};
  K.generator = augmenting_generator(K.sig, K.member);
  return K;
}

inline std::vector<std::string> builtin_names() {
  return {"set",          "linorder",       "graph",           "ordered_graph", "digraph",
          "tournament",   "even_graph",     "connected_graph", "ap_fail_fixture"};
}

/// Built-in class by name; throws PreconditionError for unknown names.
inline ClassSpec builtin(const std::string& name) {
  if (name == "set") return set_class();
  if (name == "linorder") return linorder_class();
  if (name == "graph") return graph_class();
  if (name == "ordered_graph") return ordered_graph_class();
  if (name == "digraph") return digraph_class();
  if (name == "tournament") return tournament_class();
  if (name == "even_graph") return even_graph_class();
  if (name == "connected_graph") return connected_graph_class();
  if (name == "ap_fail_fixture") return ap_fail_fixture_class();
  throw PreconditionError("unknown class '" + name + "'");
}

/// User catalog file: blocks of
///   class <name>
///   signature <sym>/<arity> ...
///   [bound <n>]
///   structure ... end      (zero or more forbidden substructures)
///   endclass
inline std::vector<ClassSpec> read_catalog(std::istream& in) {
  text::LineReader r(in);
  std::vector<ClassSpec> out;
  while (auto head = r.next()) {
    if ((*head)[0] != "class" || head->size() != 2) throw ParseError(r.line(), "expected 'class <name>'");
    std::string name = (*head)[1];
    auto sig_words = r.expect("'signature'");
    if (sig_words[0] != "signature") throw ParseError(r.line(), "expected 'signature ...'");
    Signature sig = text::parse_signature(sig_words, r.line());
    int bound = 5;
    std::vector<FinStructure> forbidden;
    while (true) {
      auto words = r.expect("'endclass'");
      if (words[0] == "endclass") break;
      if (words[0] == "bound") {
        auto b = words.size() == 2 ? text::to_int(words[1]) : std::nullopt;
        if (!b || *b < 1) throw ParseError(r.line(), "bad bound");
        bound = static_cast<int>(*b);
        continue;
      }
      r.push_back();
      const int line = r.line();
      auto ns = text::read_structure(r);
      if (!(ns.structure.signature() == sig))
        throw ParseError(line, "forbidden structure '" + ns.name + "' has a different signature");
      forbidden.push_back(ns.structure);
    }
    out.push_back(forbidden_class(name, sig, forbidden, bound));
  }
  return out;
}

}  // namespace sramsey::catalog
