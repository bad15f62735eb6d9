#pragma once

#include <bit>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "parallel.hpp"
#include "structure.hpp"

namespace sramsey {

/// Satisfied when the listed variables carry at least `k + 1` distinct colours.
struct SpreadGroup {
  std::vector<int> vars;
  int k = 1;
};

/// Satisfied when at least one of its groups is.
struct SpreadClause {
  std::vector<SpreadGroup> groups;
};

/// A finite colouring problem: colour `num_vars` variables with `colors`
/// colours so that every clause is satisfied. A solution is a "bad"
/// colouring in the arrow-relation reading.
struct ColoringProblem {
  int num_vars = 0;
  int colors = 0;
  std::vector<SpreadClause> clauses;
  /// Variable permutations mapping the clause set to itself; used for
  /// lex-leader pruning. perm[i] is the image of variable i.
  std::vector<std::vector<int>> symmetries;
};

enum class Branching { lexicographic, most_constrained };

struct SearchOptions {
  bool symmetry_breaking = true;
  Branching branching = Branching::lexicographic;
  int workers = 1;
  std::uint64_t node_limit = 0;  // per search subtree; 0: unlimited
};

struct SearchStats {
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

struct SearchResult {
  std::optional<std::vector<int>> solution;
  bool complete = true;  // false when the node limit stopped the search
  SearchStats stats;
};

namespace detail {

class SpreadSolver {
public:
  SpreadSolver(const ColoringProblem& p, const SearchOptions& opt) : p_(p), opt_(opt) {
    if (p.colors > 64) throw PreconditionError("colouring search supports at most 64 colours");
    full_ = p.colors == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << p.colors) - 1;
    value_.assign(p.num_vars, -1);
    dom_.assign(p.num_vars, full_);
    occurs_.resize(p.num_vars);
    degree_.assign(p.num_vars, 0);
    for (std::size_t c = 0; c < p.clauses.size(); ++c)
      for (const auto& g : p.clauses[c].groups)
        for (int v : g.vars) {
          if (occurs_[v].empty() || occurs_[v].back() != static_cast<int>(c)) occurs_[v].push_back(static_cast<int>(c));
          ++degree_[v];
        }
  }

  /// Applies the forced prefix assignment and initial propagation.
  bool start(const std::vector<int>& prefix) {
    for (std::size_t c = 0; c < p_.clauses.size(); ++c)
      if (!check_clause(static_cast<int>(c))) return false;
    if (!drain()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      if (value_[i] >= 0) {
        if (value_[i] != prefix[i]) return false;
        continue;
      }
      if (!(dom_[i] >> prefix[i] & 1)) return false;
      assign(static_cast<int>(i), prefix[i]);
      if (!drain()) return false;
    }
    return symmetry_ok();
  }

  /// Depth-first search; calls `on_solution` for each solution until it
  /// returns false. Returns false when stopped (by callback or node limit).
  bool search(const std::function<bool(const std::vector<int>&)>& on_solution) {
    if (stopped_) return false;
    if (opt_.node_limit && ++nodes_ > opt_.node_limit) {
      stopped_ = true;
      hit_limit_ = true;
      return false;
    }
    if (opt_.node_limit == 0) ++nodes_;
    int v = pick_var();
    if (v < 0) {
      if (!on_solution(value_)) {
        stopped_ = true;
        return false;
      }
      return true;
    }
    std::uint64_t d = dom_[v];
    for (int c = 0; c < p_.colors; ++c) {
      if (!(d >> c & 1)) continue;
      std::size_t mark = trail_.size();
      assign(v, c);
      if (drain() && symmetry_ok()) {
        if (!search(on_solution)) {
          undo(mark);
          return false;
        }
      }
      undo(mark);
    }
    return true;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool hit_limit() const { return hit_limit_; }

private:
  struct TrailEntry {
    int var;
    std::uint64_t dom;
    int value;
  };

  void assign(int v, int c) {
    trail_.push_back({v, dom_[v], value_[v]});
    value_[v] = c;
    dom_[v] = std::uint64_t{1} << c;
    queue_.push_back(v);
  }

  void restrict_domain(int v, std::uint64_t d) {
    trail_.push_back({v, dom_[v], value_[v]});
    dom_[v] = d;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto e = trail_.back();
      trail_.pop_back();
      dom_[e.var] = e.dom;
      value_[e.var] = e.value;
    }
    queue_.clear();
  }

  bool drain() {
    while (!queue_.empty()) {
      int v = queue_.back();
      queue_.pop_back();
      for (int c : occurs_[v])
        if (!check_clause(c)) {
          queue_.clear();
          return false;
        }
    }
    return true;
  }

  // Evaluates a clause; prunes domains when a single group can still be
  // satisfied and needs every unassigned member to take a fresh colour.
  bool check_clause(int c) {
    const auto& clause = p_.clauses[c];
    int live = -1, live_count = 0;
    for (std::size_t gi = 0; gi < clause.groups.size(); ++gi) {
      const auto& g = clause.groups[gi];
      std::uint64_t used = 0, open = 0;
      int unassigned = 0;
      for (int v : g.vars) {
        if (value_[v] >= 0) used |= dom_[v];
        else {
          ++unassigned;
          open |= dom_[v];
        }
      }
      const int have = std::popcount(used);
      if (have >= g.k + 1) return true;
      const int fresh = std::popcount(open & ~used);
      if (have + std::min(unassigned, fresh) >= g.k + 1) {
        live = static_cast<int>(gi);
        ++live_count;
      }
    }
    if (live_count == 0) return false;
    if (live_count > 1) return true;
    const auto& g = clause.groups[live];
    std::uint64_t used = 0, open = 0;
    int unassigned = 0;
    for (int v : g.vars) {
      if (value_[v] >= 0) used |= dom_[v];
      else {
        ++unassigned;
        open |= dom_[v];
      }
    }
    const int have = std::popcount(used);
    const int fresh = std::popcount(open & ~used);
    if (have + unassigned != g.k + 1 || unassigned > fresh) return true;
    for (int v : g.vars) {
      if (value_[v] >= 0 || !(dom_[v] & used)) continue;
      std::uint64_t nd = dom_[v] & ~used;
      if (nd == 0) return false;
      if (std::popcount(nd) == 1) assign(v, std::countr_zero(nd));
      else restrict_domain(v, nd);
    }
    return true;
  }

  // Partial lex-leader tests: x <= x o sigma for the supplied variable
  // symmetries, and first occurrences of colours in increasing order.
  bool symmetry_ok() const {
    if (!opt_.symmetry_breaking) return true;
    int top = -1;
    for (int i = 0; i < p_.num_vars; ++i) {
      int x = value_[i];
      if (x < 0) break;
      if (x > top + 1) return false;
      top = std::max(top, x);
    }
    for (const auto& sigma : p_.symmetries)
      for (int i = 0; i < p_.num_vars; ++i) {
        int a = value_[i], b = value_[sigma[i]];
        if (a < 0 || b < 0) break;
        if (a < b) break;
        if (a > b) return false;
      }
    return true;
  }

  int pick_var() const {
    if (opt_.branching == Branching::lexicographic) {
      for (int i = 0; i < p_.num_vars; ++i)
        if (value_[i] < 0) return i;
      return -1;
    }
    int best = -1;
    for (int i = 0; i < p_.num_vars; ++i) {
      if (value_[i] >= 0) continue;
      if (best < 0) {
        best = i;
        continue;
      }
      int di = std::popcount(dom_[i]), db = std::popcount(dom_[best]);
      if (di < db || (di == db && degree_[i] > degree_[best])) best = i;
    }
    return best;
  }

  const ColoringProblem& p_;
  SearchOptions opt_;
  std::uint64_t full_ = 0;
  std::vector<int> value_;
  std::vector<std::uint64_t> dom_;
  std::vector<std::vector<int>> occurs_;
  std::vector<int> degree_;
  std::vector<TrailEntry> trail_;
  std::vector<int> queue_;
  std::uint64_t nodes_ = 0;
  bool stopped_ = false;
  bool hit_limit_ = false;
};

// Number of leading variables fixed per parallel subtree. Chosen from the
// problem alone so the reported solution never depends on the worker count.
inline int split_depth(const ColoringProblem& p) {
  int d = 0;
  std::uint64_t leaves = 1;
  while (d < p.num_vars && leaves < 64 && p.colors > 1) {
    leaves *= static_cast<std::uint64_t>(p.colors);
    ++d;
  }
  return d;
}

}  // namespace detail

/// Finds a solution of the colouring problem, or proves there is none.
///
/// With lexicographic branching the reported solution is the least one in
/// lexicographic order of the value array (lex-leader pruning keeps that
/// solution reachable). The search is split on a fixed number of leading
/// variables; subtrees run on the worker pool and the solution of the first
/// subtree in order wins, so output does not depend on scheduling.
inline SearchResult find_solution(const ColoringProblem& p, const SearchOptions& opt = {}) {
  SearchResult res;
  auto t0 = std::chrono::steady_clock::now();
  if (p.colors == 0 && p.num_vars > 0) return res;
  const int depth = p.colors == 0 ? 0 : detail::split_depth(p);
  std::uint64_t subtrees = 1;
  for (int i = 0; i < depth; ++i) subtrees *= static_cast<std::uint64_t>(p.colors);
  std::vector<std::optional<std::vector<int>>> found(subtrees);
  std::vector<std::uint64_t> nodes(subtrees, 0);
  std::vector<char> limited(subtrees, 0);
  auto first = parallel_find_first(subtrees, opt.workers, [&](std::size_t s) {
    std::vector<int> prefix(depth);
    std::size_t rest = s;
    for (int i = depth - 1; i >= 0; --i) {
      prefix[i] = static_cast<int>(rest % p.colors);
      rest /= p.colors;
    }
    detail::SpreadSolver solver(p, opt);
    nodes[s] = 1;
    if (!solver.start(prefix)) return false;
    solver.search([&](const std::vector<int>& x) {
      found[s] = x;
      return false;
    });
    nodes[s] += solver.nodes();
    limited[s] = solver.hit_limit();
    return found[s].has_value() || limited[s];
  });
  for (auto n : nodes) res.stats.nodes += n;
  if (first < subtrees) {
    if (found[first]) res.solution = found[first];
    else res.complete = false;
  }
  res.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

/// Direct evaluation of a complete colouring against every clause.
/// Returns the index of the first unsatisfied clause, or -1.
inline int first_unsatisfied_clause(const ColoringProblem& p, const std::vector<int>& x) {
  for (std::size_t c = 0; c < p.clauses.size(); ++c) {
    bool sat = false;
    for (const auto& g : p.clauses[c].groups) {
      std::uint64_t used = 0;
      for (int v : g.vars) used |= std::uint64_t{1} << x[v];
      if (std::popcount(used) >= g.k + 1) {
        sat = true;
        break;
      }
    }
    if (!sat) return static_cast<int>(c);
  }
  return -1;
}

/// Calls `visit` on every solution in lexicographic order (no symmetry
/// pruning). Stops early when `visit` returns false.
inline void for_each_solution(const ColoringProblem& p, const std::function<bool(const std::vector<int>&)>& visit) {
  if (p.colors == 0) {
    if (p.num_vars == 0 && first_unsatisfied_clause(p, {}) < 0) visit({});
    return;
  }
  SearchOptions opt;
  opt.symmetry_breaking = false;
  detail::SpreadSolver solver(p, opt);
  if (!solver.start({})) return;
  solver.search(visit);
}

}  // namespace sramsey
