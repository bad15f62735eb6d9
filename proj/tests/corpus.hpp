// A fixed set of certificates, one or more per kind, built at a given
// worker count.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sramsey/sramsey.hpp"

namespace corpus {

using namespace sramsey;
namespace cat = sramsey::catalog;

inline ClassSpec resolve(const std::string& name) { return cat::builtin(name); }

inline FinStructure chain_window(int n) {
  return expand(cat::pure_set(n), cat::order_sig(), {cat::chain(n).table(0)});
}

inline std::vector<std::pair<std::string, Certificate>> build(int workers) {
  std::vector<std::pair<std::string, Certificate>> out;
  SearchOptions opt;
  opt.workers = workers;
  auto add = [&](std::string name, Certificate c) { out.emplace_back(std::move(name), std::move(c)); };

  const auto c1 = cat::chain(1), c2 = cat::chain(2), c3 = cat::chain(3);
  add("arrows-6-chain", arrow_certificate(c2, c3, cat::chain(6), 2, 1, arrows(cat::chain(6), c3, c2, 2, opt)));
  add("arrows-5-chain", arrow_certificate(c2, c3, cat::chain(5), 2, 1, arrows(cat::chain(5), c3, c2, 2, opt)));
  add("arrows-k3", arrow_certificate(cat::complete_graph(1), cat::complete_graph(2), cat::complete_graph(3), 2, 1,
                                     arrows(cat::complete_graph(3), cat::complete_graph(2), cat::complete_graph(1), 2, opt)));
  add("arrows-degree", arrow_certificate(cat::complete_graph(2), cat::path_graph(3), cat::cycle_graph(5), 3, 2,
                                         degree_arrows(cat::cycle_graph(5), cat::path_graph(3), cat::complete_graph(2), 3, 2, opt)));

  auto lo = cat::linorder_class();
  add("witness-linorder", witness_certificate("linorder", c2, c3, 2, 1, find_ramsey_witness(lo, c2, c3, 2, 6, 1, opt)));
  add("witness-unknown", witness_certificate("linorder", c2, c3, 2, 1, find_ramsey_witness(lo, c2, c3, 2, 5, 1, opt)));
  add("degree-edge", degree_certificate("graph", compute_degree(cat::graph_class(), cat::complete_graph(2), {0, 1},
                                                                 {3, 2, 4}, opt)));
  std::vector<TupleDegree> tuples{{{0}, 1}, {{0, 1}, 1}};
  add("joint", joint_certificate("linorder", c2, tuples, 2, 7, joint_degree_witness(lo, c2, tuples, 2, 7, opt)));

  add("ecrp-yes", ecrp_certificate(c1, {0}, c2, c3, 1, Rational(0),
                                   check_ecrp_instance(c1, {0}, c2, c3, 1, Rational(0), default_ecrp_guard, workers),
                                   workers));
  add("ecrp-no", ecrp_certificate(c1, {0}, c2, c2, 1, Rational(0),
                                  check_ecrp_instance(c1, {0}, c2, c2, 1, Rational(0), default_ecrp_guard, workers),
                                  workers));
  add("ecrp-eps", ecrp_certificate(c1, {0}, c3, cat::chain(4), 2, Rational(1) / 3,
                                   check_ecrp_instance(c1, {0}, c3, cat::chain(4), 2, Rational(1) / 3,
                                                       default_ecrp_guard, workers),
                                   workers));

  auto P = ExpansionPair::make(cat::graph_class(), cat::ordered_graph_class());
  add("expansions-p3", expansions_certificate(P, cat::path_graph(3), count_expansions(cat::path_graph(3), P)));
  add("vanthe-k2", vanthe_certificate(P, cat::complete_graph(2), check_expansion_vanthe(P, cat::complete_graph(2), 4)));
  auto W = chain_window(4);
  add("window-refused", window_expansion_certificate(W, Signature{}, check_window_expansion(
                                                                          W, Signature{}, ExpansionSide::right, 2,
                                                                          WindowMode::automorphisms, workers)));
  add("window-partial", window_expansion_certificate(W, Signature{}, check_window_expansion(
                                                                          W, Signature{}, ExpansionSide::two_sided, 2,
                                                                          WindowMode::partial_isomorphisms, workers)));
  add("flow-3", flow_window_certificate(chain_window(5), Signature{}, minimal_flow_window(chain_window(5), Signature{}, 3, workers)));

  Chain ch;
  ch.stages = {cat::chain(3)};
  add("orbit", orbit_certificate(ch, build_orbit_system(ch, {{0}, {1}, {0, 1}})));
  auto lim = build_limit_approximant(lo, 2, 1);
  add("orbit-limit", orbit_certificate(lim, build_orbit_system(lim, {{0}})));

  auto g4 = cat::graph_class(3);
  add("class-graph", class_certificate("graph", 3, check_hp(g4), check_jep(g4, workers), check_ap(g4, workers)));
  auto fx = cat::ap_fail_fixture_class();
  add("class-fixture", class_certificate("ap_fail_fixture", fx.size_bound, check_hp(fx), check_jep(fx, workers),
                                         check_ap(fx, workers)));
  const auto lim3 = build_limit_approximant(lo, 3, 1);
  add("limit-linorder", limit_certificate("linorder", 3, 1, &lim3));
  try {
    build_limit_approximant(fx, 2, 1);
  } catch (const AmalgamationFailure& e) {
    add("limit-fixture", limit_certificate("ap_fail_fixture", 2, 1, nullptr, e.what()));
  }
  return out;
}

}  // namespace corpus
