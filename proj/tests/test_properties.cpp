#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sramsey/sramsey.hpp"

using namespace sramsey;
namespace cat = sramsey::catalog;

namespace {

constexpr int kTrials = 120;

FinStructure random_graph(int n, std::mt19937_64& rng, double p = 0.5) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return cat::graph_from_edges(n, edges);
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// C with one more vertex joined to a random subset.
FinStructure grow(const FinStructure& C, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& t : C.table(0))
    if (t[0] < t[1]) edges.emplace_back(t[0], t[1]);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < C.size(); ++i)
    if (coin(rng)) edges.emplace_back(i, C.size());
  return cat::graph_from_edges(C.size() + 1, edges);
}

// Order-preserving inclusion of chain(m) into chain(m+1) skipping one point.
std::vector<Point> skip_inclusion(int m, std::mt19937_64& rng) {
  const int skip = uniform(rng, 0, m);
  std::vector<Point> f(m);
  for (int i = 0; i < m; ++i) f[i] = i < skip ? i : i + 1;
  return f;
}

// Threads over raw fibers: one copy per family tuple, closed under deletion.
std::size_t raw_threads(const OrbitSystem& sys) {
  std::map<Tuple, std::size_t> pos;
  for (std::size_t i = 0; i < sys.index.size(); ++i) pos[sys.index[i]] = i;
  std::vector<Tuple> pick(sys.index.size());
  std::size_t count = 0;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == sys.index.size()) {
      ++count;
      return;
    }
    for (const auto& x : sys.raw[i]) {
      bool ok = true;
      for (std::size_t d = 0; ok && sys.index[i].size() > 1 && d < x.size(); ++d) {
        Tuple a, b;
        for (std::size_t j = 0; j < x.size(); ++j)
          if (j != d) a.push_back(sys.index[i][j]), b.push_back(x[j]);
        ok = pick[pos.at(a)] == b;
      }
      if (!ok) continue;
      pick[i] = x;
      go(i + 1);
    }
  };
  go(0);
  return count;
}

}  // namespace

TEST(Properties, ArrowVerdictsMatchOracleAndSurviveRelabelling) {
  std::mt19937_64 rng(11);
  const auto A = cat::complete_graph(1);
  for (int t = 0; t < kTrials; ++t) {
    auto B = random_graph(uniform(rng, 2, 3), rng);
    auto C = random_graph(uniform(rng, 3, 6), rng);
    const int r = uniform(rng, 1, 3);
    auto v = arrows(C, B, A, r);
    ASSERT_NE(v.kind, Answer::unknown);
    const bool expect = oracle::arrows_exhaustive(C, B, A, r);
    EXPECT_EQ(v.kind == Answer::yes, expect) << "trial " << t;
    auto [C2, pc] = oracle::shuffle(C, rng);
    auto [B2, pb] = oracle::shuffle(B, rng);
    EXPECT_EQ(arrows(C2, B2, A, r).kind, v.kind) << "trial " << t;
    if (v.bad_coloring) EXPECT_TRUE(oracle::is_bad_coloring(C, B, A, *v.bad_coloring, 1));
  }
}

TEST(Properties, ArrowsIsUpwardClosedUnderExtension) {
  std::mt19937_64 rng(12);
  const auto A = cat::complete_graph(1);
  int yes_seen = 0;
  for (int t = 0; t < kTrials; ++t) {
    auto B = random_graph(2, rng);
    auto C = random_graph(uniform(rng, 3, 5), rng, 0.6);
    auto v = arrows(C, B, A, 2);
    if (v.kind != Answer::yes) continue;
    ++yes_seen;
    auto D = grow(C, rng);
    EXPECT_EQ(arrows(D, B, A, 2).kind, Answer::yes) << "trial " << t;
  }
  EXPECT_GT(yes_seen, 10);
}

TEST(Properties, ArrowsIsMonotoneInColoursAndDegree) {
  std::mt19937_64 rng(13);
  for (int t = 0; t < kTrials; ++t) {
    const auto A = cat::complete_graph(uniform(rng, 1, 2));
    auto B = random_graph(3, rng, 0.7);
    auto C = random_graph(uniform(rng, 3, 5), rng, 0.7);
    const int r = uniform(rng, 2, 3);
    auto big = arrows(C, B, A, r);
    if (big.kind == Answer::yes) EXPECT_EQ(arrows(C, B, A, r - 1).kind, Answer::yes) << "trial " << t;
    const int k = uniform(rng, 1, 2);
    auto dk = degree_arrows(C, B, A, r, k);
    if (dk.kind == Answer::yes) EXPECT_EQ(degree_arrows(C, B, A, r, k + 1).kind, Answer::yes) << "trial " << t;
  }
}

TEST(Properties, EmbeddingCountsAreInvariantUnderRelabelling) {
  std::mt19937_64 rng(14);
  for (int t = 0; t < kTrials; ++t) {
    auto A = random_graph(uniform(rng, 1, 3), rng);
    auto B = random_graph(uniform(rng, 2, 5), rng);
    const auto n = embedding_maps(A, B).size();
    EXPECT_EQ(n, oracle::embeddings(A, B).size());
    auto [A2, pa] = oracle::shuffle(A, rng);
    auto [B2, pb] = oracle::shuffle(B, rng);
    EXPECT_EQ(embedding_maps(A2, B2).size(), n) << "trial " << t;
  }
}

TEST(Properties, CanonicalFormIsIdempotentAndIsoInvariant) {
  std::mt19937_64 rng(15);
  for (int t = 0; t < kTrials; ++t) {
    auto G = random_graph(uniform(rng, 1, 6), rng);
    auto cf = canonical_form(G);
    EXPECT_EQ(canonical_form(cf.form).form, cf.form);
    auto [H, p] = oracle::shuffle(G, rng);
    EXPECT_EQ(canonical_form(H).form, cf.form) << "trial " << t;
    EXPECT_EQ(relabel(G, cf.relabel), cf.form);
    EXPECT_EQ(isomorphic(G, H), true);
  }
}

TEST(Properties, ExpansionCountsAreInvariantUnderRelabelling) {
  std::mt19937_64 rng(16);
  auto P = ExpansionPair::make(cat::graph_class(), cat::ordered_graph_class());
  for (int t = 0; t < kTrials; ++t) {
    auto G = random_graph(uniform(rng, 1, 4), rng);
    auto e = count_expansions(G, P);
    EXPECT_EQ(e.count, oracle::factorial(G.size()) / oracle::automorphism_count(G));
    auto [H, p] = oracle::shuffle(G, rng);
    EXPECT_EQ(count_expansions(H, P).count, e.count) << "trial " << t;
  }
}

TEST(Properties, CompositionIsAssociative) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int t = 0; t < kTrials; ++t) {
    auto A = random_graph(uniform(rng, 1, 2), rng);
    auto B = random_graph(uniform(rng, 2, 3), rng);
    auto C = random_graph(uniform(rng, 3, 4), rng);
    auto D = random_graph(uniform(rng, 4, 5), rng);
    auto f = enumerate_embeddings(A, B), g = enumerate_embeddings(B, C), h = enumerate_embeddings(C, D);
    if (f.empty() || g.empty() || h.empty()) continue;
    const auto& x = f[uniform(rng, 0, f.size() - 1)];
    const auto& y = g[uniform(rng, 0, g.size() - 1)];
    const auto& z = h[uniform(rng, 0, h.size() - 1)];
    auto left = compose(z, compose(y, x)), right = compose(compose(z, y), x);
    EXPECT_EQ(left, right);
    EXPECT_TRUE(oracle::maps_preserve_and_reflect(A, D, left.map()));
    ++checked;
  }
  EXPECT_GT(checked, 0);
}

TEST(Properties, EcrpIsMonotoneInEpsilonAndStrongImpliesWeak) {
  std::mt19937_64 rng(18);
  const std::vector<Rational> eps{Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(1)};
  const auto A = cat::chain(1);
  for (int t = 0; t < kTrials; ++t) {
    const int b = uniform(rng, 1, 3);
    const int c = uniform(rng, b, b == 3 ? 4 : b + 1);
    const int r = uniform(rng, 1, 2);
    auto B = cat::chain(b), C = cat::chain(c);
    const std::size_t i = uniform(rng, 0, 3), j = uniform(rng, i + 1, 4);
    auto lo = check_ecrp_instance(A, {0}, B, C, r, eps[i]);
    auto hi = check_ecrp_instance(A, {0}, B, C, r, eps[j]);
    ASSERT_NE(lo.kind, Answer::unknown);
    if (lo.kind == Answer::yes) EXPECT_EQ(hi.kind, Answer::yes) << "trial " << t;
    auto strong = strong_ecrp_instance(A, {0}, B, C, r);
    if (strong.kind == Answer::yes) EXPECT_EQ(lo.kind, Answer::yes) << "trial " << t;
  }
}

TEST(Properties, OrbitSystemsAreSurjectiveAndConsistent) {
  std::mt19937_64 rng(19);
  for (int t = 0; t < kTrials; ++t) {
    Chain ch;
    const int base = uniform(rng, 2, 3);
    auto top = random_graph(base + uniform(rng, 0, 2), rng);
    for (int m = base; m <= top.size(); ++m) {
      std::vector<Point> pts(m);
      std::iota(pts.begin(), pts.end(), 0);
      ch.stages.push_back(induced_substructure(top, pts).first);
      if (m > base) {
        std::vector<Point> inc(m - 1);
        std::iota(inc.begin(), inc.end(), 0);
        ch.inclusions.push_back(inc);
      }
    }
    std::set<Tuple> fam;
    const int picks = uniform(rng, 1, 3);
    for (int q = 0; q < picks; ++q) {
      Tuple x{uniform(rng, 0, base - 1)};
      fam.insert(x);
      if (uniform(rng, 0, 1)) {
        int y = uniform(rng, 0, base - 1);
        if (y != x[0]) {
          fam.insert({y});
          x.push_back(y);
        }
      }
      fam.insert(x);
    }
    std::vector<Tuple> family(fam.begin(), fam.end());
    auto sys = build_orbit_system(ch, family);
    EXPECT_EQ(orbit_system_violation(sys), "") << "trial " << t;
    for (const auto& b : sys.bonding) {
      std::set<int> hit(b.map.begin(), b.map.end());
      EXPECT_EQ(hit.size(), sys.fibers[b.to].size()) << "bonding onto fiber " << b.to;
    }
    EXPECT_EQ(count_threads(sys), raw_threads(sys)) << "trial " << t;
  }
}

TEST(Properties, BadColouringThreadsRestrict) {
  std::mt19937_64 rng(20);
  const auto A = cat::chain(2), B = cat::chain(3);
  for (int t = 0; t < kTrials; ++t) {
    Chain ch;
    const int start = uniform(rng, 2, 4);
    const int end = uniform(rng, start, 5);
    for (int m = start; m <= end; ++m) {
      ch.stages.push_back(cat::chain(m));
      if (m > start) ch.inclusions.push_back(skip_inclusion(m - 1, rng));
    }
    auto thread = extend_bad_colorings(A, B, 2, ch);
    ASSERT_EQ(thread.size(), ch.stages.size());
    for (std::size_t i = 0; i < thread.size(); ++i) {
      EXPECT_TRUE(oracle::is_bad_coloring(ch.stages[i], B, A, thread[i], 1));
      if (i == 0) continue;
      auto small = ArrowSpace::build(A, B, ch.stages[i - 1]);
      auto big = ArrowSpace::build(A, B, ch.stages[i]);
      EXPECT_EQ(restrict_coloring(small, big, ch.inclusions[i - 1], thread[i]), thread[i - 1]) << "trial " << t;
    }
  }
}
