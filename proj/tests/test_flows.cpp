#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"

using namespace sramsey;
namespace cat = sramsey::catalog;

namespace {

ExpansionPair graphs_to_ordered() { return ExpansionPair::make(cat::graph_class(), cat::ordered_graph_class()); }
ExpansionPair sets_to_orders() { return ExpansionPair::make(cat::set_class(), cat::linorder_class()); }

// Aut(A0)-orbits of the labelled expansions, computed by brute force.
std::size_t orbit_count(const FinStructure& A0, const std::vector<FinStructure>& labelled) {
  std::vector<std::vector<Point>> autos;
  std::vector<Point> p(A0.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    if (oracle::maps_preserve_and_reflect(A0, A0, p)) autos.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::set<std::vector<FinStructure::Table>> seen;
  std::size_t orbits = 0;
  for (const auto& X : labelled) {
    if (seen.count(X.tables())) continue;
    ++orbits;
    for (const auto& a : autos) seen.insert(relabel(X, a).tables());
  }
  return orbits;
}

// Permutations of {0..n-1}, each applied to one chain: the S_n orbit of the
// order relation.
std::set<std::vector<FinStructure::Table>> chain_orbit(int n) {
  std::set<std::vector<FinStructure::Table>> out;
  std::vector<Point> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    out.insert(relabel(cat::chain(n), p).tables());
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

FinStructure window_over(const FinStructure& base, const Signature& extra_sig, const FinStructure& extra) {
  std::vector<FinStructure::Table> tables;
  for (std::size_t s = 0; s < extra_sig.size(); ++s) tables.push_back(extra.table(s));
  Signature sig = base.signature();
  std::vector<Symbol> syms(sig.symbols());
  for (const auto& s : extra_sig) syms.push_back(s);
  return expand(base, Signature(syms), tables);
}

}  // namespace

TEST(ExpansionPair, CatalogPairsAreConsistent) {
  EXPECT_EQ(expansion_pair_violation(graphs_to_ordered(), 4), "");
  EXPECT_EQ(expansion_pair_violation(sets_to_orders(), 5), "");
}

TEST(CountExpansions, PairOfPointsHasOneOrder) {
  auto P = sets_to_orders();
  EXPECT_EQ(count_expansions(cat::pure_set(2), P).count, 1u);
  EXPECT_EQ(labelled_expansions(cat::pure_set(2), P).size(), 2u);
}

TEST(CountExpansions, OrderedPathAndTriangle) {
  auto P = graphs_to_ordered();
  auto p3 = cat::path_graph(3), k3 = cat::complete_graph(3);
  EXPECT_EQ(count_expansions(p3, P).count, 3u);
  EXPECT_EQ(count_expansions(k3, P).count, 1u);
  EXPECT_EQ(oracle::factorial(3) / oracle::automorphism_count(p3), 3u);
  EXPECT_EQ(oracle::factorial(3) / oracle::automorphism_count(k3), 1u);
  EXPECT_EQ(orbit_count(p3, labelled_expansions(p3, P)), 3u);
}

TEST(CountExpansions, OrbitFormulaOnAllSmallGraphs) {
  auto P = graphs_to_ordered();
  for (const auto& G : cat::graph_class().members_up_to(4)) {
    auto c = count_expansions(G, P);
    EXPECT_EQ(c.count, oracle::factorial(G.size()) / oracle::automorphism_count(G));
    EXPECT_EQ(c.count, orbit_count(G, labelled_expansions(G, P)));
    for (const auto& X : c.expansions) EXPECT_EQ(reduct(X, P.sig0), G);
  }
}

TEST(Vanthe, SetsToOrders) {
  auto P = sets_to_orders();
  for (int n = 1; n <= 3; ++n) {
    auto v = check_expansion_vanthe(P, cat::pure_set(n), 5);
    ASSERT_EQ(v.kind, Answer::yes);
    EXPECT_EQ(v.B0->size(), n);
  }
}

TEST(Vanthe, GraphsToOrderedGraphs) {
  auto P = graphs_to_ordered();
  auto v1 = check_expansion_vanthe(P, cat::complete_graph(1), 3);
  ASSERT_EQ(v1.kind, Answer::yes);
  EXPECT_EQ(v1.B0->size(), 1);
  auto v2 = check_expansion_vanthe(P, cat::complete_graph(2), 4);
  ASSERT_EQ(v2.kind, Answer::yes);
  // Oracle: every labelled expansion of A0 embeds into every labelled
  // expansion of B0.
  for (const auto& a : labelled_expansions(cat::complete_graph(2), P))
    for (const auto& b : labelled_expansions(*v2.B0, P)) EXPECT_FALSE(oracle::embeddings(a, b).empty());
}

TEST(WindowExpansion, ChainWindowNeedsPartialIsomorphisms) {
  auto W = window_over(cat::pure_set(4), cat::order_sig(), cat::chain(4));
  auto refused = check_right_expansion(W, Signature{}, 2);
  EXPECT_EQ(refused.kind, Answer::unknown);
  EXPECT_FALSE(refused.refusal.empty());
  auto v = check_right_expansion(W, Signature{}, 2, WindowMode::partial_isomorphisms);
  ASSERT_EQ(v.kind, Answer::yes);
  for (const auto& [A, B] : v.witnesses) EXPECT_EQ(A.size(), B.size());
}

TEST(WindowExpansion, IdentityExpansionTakesBEqualA) {
  auto W = cat::pure_set(4);
  for (auto side : {ExpansionSide::right, ExpansionSide::left, ExpansionSide::two_sided}) {
    auto v = check_window_expansion(W, Signature{}, side, 3);
    ASSERT_EQ(v.kind, Answer::yes);
    for (const auto& [A, B] : v.witnesses) EXPECT_EQ(A.size(), B.size());
  }
  auto K3 = cat::complete_graph(3);
  EXPECT_EQ(check_two_sided_expansion(K3, cat::graph_sig(), 2).kind, Answer::yes);
}

TEST(WindowExpansion, TwoSidedMatchesRightOnCatalogWindows) {
  std::vector<std::pair<FinStructure, Signature>> windows = {
      {window_over(cat::pure_set(3), cat::order_sig(), cat::chain(3)), Signature{}},
      {window_over(cat::pure_set(4), cat::order_sig(), cat::chain(4)), Signature{}},
      {cat::with_natural_order(cat::path_graph(3)), cat::graph_sig()},
      {cat::with_natural_order(cat::cycle_graph(4)), cat::graph_sig()},
      {cat::complete_graph(4), cat::graph_sig()},
  };
  for (const auto& [W, sig0] : windows)
    for (int k = 1; k <= 2; ++k) {
      auto right = check_right_expansion(W, sig0, k, WindowMode::partial_isomorphisms);
      auto two = check_two_sided_expansion(W, sig0, k, WindowMode::partial_isomorphisms);
      EXPECT_EQ(right.kind, two.kind) << W.size() << " " << k;
    }
}

TEST(WindowExpansion, WorkerCountDoesNotChangeVerdict) {
  auto W = cat::with_natural_order(cat::cycle_graph(5));
  auto a = check_window_expansion(W, cat::graph_sig(), ExpansionSide::left, 2, WindowMode::partial_isomorphisms, 1);
  auto b = check_window_expansion(W, cat::graph_sig(), ExpansionSide::left, 2, WindowMode::partial_isomorphisms, 4);
  EXPECT_EQ(a.kind, b.kind);
  EXPECT_EQ(a.witnesses, b.witnesses);
}

TEST(MinimalFlow, TwoAndThreePoints) {
  auto W = window_over(cat::pure_set(5), cat::order_sig(), cat::chain(5));
  auto f2 = minimal_flow_window(W, Signature{}, 2);
  EXPECT_EQ(f2.points.size(), 2u);
  auto f3 = minimal_flow_window(W, Signature{}, 3);
  ASSERT_EQ(f3.points.size(), 6u);
  std::set<std::vector<FinStructure::Table>> got;
  for (const auto& X : f3.points) got.insert(X.tables());
  EXPECT_EQ(got, chain_orbit(3));
}

TEST(MinimalFlow, IdentityExpansionIsASingleton) {
  auto W = cat::complete_graph(4);
  auto fw = minimal_flow_window(W, cat::graph_sig(), 3);
  EXPECT_EQ(fw.points.size(), 1u);
}

TEST(MinimalFlow, ClosedUnderWindowSymmetriesAndRestriction) {
  auto W = cat::with_natural_order(cat::cycle_graph(5));
  auto W0 = reduct(W, cat::graph_sig());
  for (int n = 1; n <= 4; ++n) {
    auto fw = minimal_flow_window(W, cat::graph_sig(), n);
    std::set<std::vector<FinStructure::Table>> have;
    for (const auto& X : fw.points) have.insert(X.tables());
    for (const auto& alpha : automorphisms(W0)) {
      bool stable = true;
      for (int i = 0; i < n; ++i) stable = stable && alpha[i] < n;
      if (!stable) continue;
      std::vector<Point> a(alpha.begin(), alpha.begin() + n);
      for (const auto& X : fw.points) EXPECT_TRUE(have.count(relabel(X, a).tables()));
    }
    for (int m = 0; m < n; ++m) {
      auto lower = minimal_flow_window(W, cat::graph_sig(), m).points;
      auto restricted = restrict_flow_points(fw, m);
      ASSERT_EQ(lower.size(), restricted.size());
      for (std::size_t i = 0; i < lower.size(); ++i) EXPECT_EQ(lower[i], restricted[i]);
    }
  }
}

TEST(MinimalFlow, ExportFormat) {
  auto W = window_over(cat::pure_set(3), cat::order_sig(), cat::chain(3));
  std::ostringstream os;
  write_flow_window(os, minimal_flow_window(W, Signature{}, 2));
  std::istringstream in(os.str());
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "window 2");
  auto blocks = text::read_structures(in);
  EXPECT_EQ(blocks.size(), 3u);
}

TEST(OrbitSystem, SingleTuple) {
  Chain ch;
  ch.stages = {cat::chain(4)};
  auto sys = build_orbit_system(ch, {{0}});
  ASSERT_EQ(sys.fibers.size(), 1u);
  EXPECT_EQ(sys.fibers[0].size(), 4u);
  EXPECT_EQ(count_threads(sys), 4u);
}

TEST(OrbitSystem, PointInsidePairOnThreeChain) {
  Chain ch;
  ch.stages = {cat::chain(3)};
  auto sys = build_orbit_system(ch, {{0}, {1}, {0, 1}});
  EXPECT_EQ(sys.raw[0].size(), 3u);
  EXPECT_EQ(sys.raw[2].size(), 3u);
  EXPECT_EQ(orbit_system_violation(sys), "");
  // Oracle: coherent choices over the raw fibers.
  std::size_t threads = 0;
  for (const auto& x : sys.raw[0])
    for (const auto& y : sys.raw[1])
      for (const auto& p : sys.raw[2]) threads += p[0] == x[0] && p[1] == y[0];
  EXPECT_EQ(count_threads(sys), threads);
  EXPECT_EQ(threads, 3u);
}

TEST(OrbitSystem, EmptyFamilyHasOneEmptyThread) {
  Chain ch;
  ch.stages = {cat::chain(3)};
  auto sys = build_orbit_system(ch, {});
  EXPECT_EQ(count_threads(sys), 1u);
}

TEST(OrbitSystem, RejectsFamiliesNotClosedUnderSubtuples) {
  Chain ch;
  ch.stages = {cat::chain(3)};
  EXPECT_THROW(build_orbit_system(ch, {{0, 1}}), PreconditionError);
}

TEST(OrbitSystem, LimitChainFibersLiveInTheTopStage) {
  auto ch = build_limit_approximant(cat::linorder_class(), 2, 1);
  auto sys = build_orbit_system(ch, {{0}});
  EXPECT_EQ(sys.raw[0].size(), static_cast<std::size_t>(ch.stages.back().size()));
  std::ostringstream os;
  write_orbit_system(os, sys);
  EXPECT_NE(os.str().find("orbit-system 1"), std::string::npos);
}

TEST(Metrizability, DegreesAreOneOnCatalog) {
  for (const auto& e : metrizability_indicator(cat::linorder_class(), 2, {3, 2, 6})) {
    EXPECT_EQ(e.at_bounds.k, 1);
    EXPECT_FALSE(e.growth);
  }
  for (const auto& e : metrizability_indicator(cat::set_class(), 1, {3, 2, 5})) EXPECT_EQ(e.at_bounds.k, 1);
  auto g = metrizability_indicator(cat::graph_class(), 1, {2, 2, 4});
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].at_bounds.k, 1);
}

TEST(Metrizability, InjectivePairInPureSetsHasDegreeTwo) {
  // Copies of an injective pair come in both orientations; colouring by
  // orientation puts two colours on every copy of any larger set.
  auto e = metrizability_indicator(cat::set_class(), 2, {3, 2, 4});
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[1].at_bounds.k, 2);
  EXPECT_EQ(oracle::least_degree(cat::pure_set(4), cat::pure_set(3), cat::pure_set(2), 2), 2);
  EXPECT_EQ(oracle::least_degree(cat::pure_set(4), cat::pure_set(2), cat::pure_set(2), 2), 2);
}
