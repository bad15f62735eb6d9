#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "embeddings.hpp"
#include "fraisse.hpp"
#include "text_format.hpp"

namespace sramsey {

/// One restriction map of the system: deleting coordinate `dropped` of
/// index[from] gives index[to]; map[i] is the fiber position of the image of
/// fiber element i.
struct Bonding {
  std::size_t from = 0;
  std::size_t to = 0;
  int dropped = 0;
  std::vector<int> map;
};

/// Finite inverse system of copies of tuples.
///
/// `raw` holds, per tuple, all its copies in the top stage of the window
/// chain. Restriction maps need not be onto the raw fibers (a point of a
/// finite chain may have nothing above it), so `fibers` keeps the largest
/// subsystem on which every restriction is defined and onto: elements
/// outside the image of a longer tuple, or restricting outside a shorter
/// fiber, are removed until nothing changes. Bonding maps act on `fibers`.
struct OrbitSystem {
  std::vector<Tuple> index;  // tuples over stage 0, by length then lexicographically
  std::vector<std::vector<Tuple>> raw;
  std::vector<std::vector<Tuple>> fibers;
  std::vector<Bonding> bonding;
};

namespace detail {

inline Tuple drop_coordinate(const Tuple& t, int i) {
  Tuple out;
  for (int j = 0; j < static_cast<int>(t.size()); ++j)
    if (j != i) out.push_back(t[j]);
  return out;
}

}  // namespace detail

/// Empty string when every nonempty one-coordinate deletion of a family
/// tuple is again in the family.
inline std::string subtuple_closure_violation(const std::vector<Tuple>& family) {
  std::set<Tuple> have(family.begin(), family.end());
  for (const auto& t : family)
    for (int i = 0; t.size() > 1 && i < static_cast<int>(t.size()); ++i)
      if (!have.count(detail::drop_coordinate(t, i))) {
        std::string s;
        for (auto x : detail::drop_coordinate(t, i)) s += (s.empty() ? "" : ",") + std::to_string(x);
        return "subtuple (" + s + ") is missing from the family";
      }
  return {};
}

inline OrbitSystem build_orbit_system(const Chain& chain, std::vector<Tuple> family) {
  if (chain.stages.empty()) throw PreconditionError("build_orbit_system: empty chain");
  if (auto why = chain_violation(chain); !why.empty()) throw PreconditionError("build_orbit_system: " + why);
  if (auto why = subtuple_closure_violation(family); !why.empty()) throw PreconditionError("build_orbit_system: " + why);
  std::sort(family.begin(), family.end(), [](const Tuple& a, const Tuple& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  family.erase(std::unique(family.begin(), family.end()), family.end());
  const FinStructure& base = chain.stages.front();
  const FinStructure& top = chain.stages.back();
  const auto into_top = chain.composite(0, chain.stages.size() - 1);

  OrbitSystem sys;
  sys.index = family;
  std::map<Tuple, std::size_t> where;
  for (std::size_t i = 0; i < family.size(); ++i) {
    where[family[i]] = i;
    Tuple lifted;
    for (Point p : family[i]) {
      if (p < 0 || p >= base.size()) throw PreconditionError("build_orbit_system: tuple entry out of range");
      lifted.push_back(into_top[p]);
    }
    std::vector<Tuple> copies;
    for (auto& c : copies_of_tuple(top, lifted, top)) copies.push_back(std::move(c.image));
    std::sort(copies.begin(), copies.end());
    sys.raw.push_back(std::move(copies));
  }
  // Prune in both directions, longest tuples first;
  // repeat until nothing changes.
  auto fib = sys.raw;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = family.size(); i-- > 0;) {
      for (int d = 0; family[i].size() > 1 && d < static_cast<int>(family[i].size()); ++d) {
        const std::size_t j = where.at(detail::drop_coordinate(family[i], d));
        std::set<Tuple> image;
        for (const auto& x : fib[i]) image.insert(detail::drop_coordinate(x, d));
        std::vector<Tuple> kept;
        for (const auto& y : fib[j])
          if (image.count(y)) kept.push_back(y);
        if (kept.size() != fib[j].size()) {
          fib[j] = std::move(kept);
          changed = true;
        }
        std::vector<Tuple> lifted;
        for (const auto& x : fib[i])
          if (std::binary_search(fib[j].begin(), fib[j].end(), detail::drop_coordinate(x, d))) lifted.push_back(x);
        if (lifted.size() != fib[i].size()) {
          fib[i] = std::move(lifted);
          changed = true;
        }
      }
    }
  }
  sys.fibers = std::move(fib);
  for (std::size_t i = 0; i < family.size(); ++i)
    for (int d = 0; family[i].size() > 1 && d < static_cast<int>(family[i].size()); ++d) {
      Bonding b{i, where.at(detail::drop_coordinate(family[i], d)), d, {}};
      for (const auto& x : sys.fibers[i]) {
        auto y = detail::drop_coordinate(x, d);
        const auto& target = sys.fibers[b.to];
        b.map.push_back(static_cast<int>(std::lower_bound(target.begin(), target.end(), y) - target.begin()));
      }
      sys.bonding.push_back(std::move(b));
    }
  return sys;
}

/// Empty string when every bonding map is a well-defined surjection onto
/// its target fiber and any two deletion orders agree on every element.
inline std::string orbit_system_violation(const OrbitSystem& sys) {
  for (const auto& b : sys.bonding) {
    const auto& src = sys.fibers[b.from];
    const auto& dst = sys.fibers[b.to];
    if (b.map.size() != src.size()) return "bonding map has the wrong length";
    std::vector<char> hit(dst.size(), 0);
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (b.map[i] < 0 || b.map[i] >= static_cast<int>(dst.size()) ||
          dst[b.map[i]] != detail::drop_coordinate(src[i], b.dropped))
        return "bonding map sends an element outside its target fiber";
      hit[b.map[i]] = 1;
    }
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return "bonding map is not surjective";
  }
  // Functoriality: dropping d1 then d2 equals dropping the same two
  // original coordinates in the other order.
  std::map<std::pair<std::size_t, int>, const Bonding*> by;
  for (const auto& b : sys.bonding) by[{b.from, b.dropped}] = &b;
  for (const auto& b1 : sys.bonding)
    for (const auto& b2 : sys.bonding) {
      if (b2.from != b1.to) continue;
      // b2 drops position b2.dropped of the shortened tuple; in the original
      // numbering that is e, and the commuting route drops e first.
      const int d1 = b1.dropped, e = b2.dropped >= d1 ? b2.dropped + 1 : b2.dropped;
      auto first = by.find({b1.from, e});
      if (first == by.end()) continue;
      const int second_pos = d1 > e ? d1 - 1 : d1;
      auto second = by.find({first->second->to, second_pos});
      if (second == by.end()) continue;
      for (std::size_t i = 0; i < b1.map.size(); ++i)
        if (b2.map[b1.map[i]] != second->second->map[first->second->map[i]])
          return "restriction maps do not commute";
    }
  return {};
}

/// Coherent choices of one fiber element per tuple, in lexicographic order
/// of the index vector. Visiting stops when `visit` returns false.
inline void for_each_thread(const OrbitSystem& sys, const std::function<bool(const std::vector<int>&)>& visit) {
  const std::size_t m = sys.index.size();
  std::vector<std::vector<const Bonding*>> touching(m);
  for (const auto& b : sys.bonding) touching[std::max(b.from, b.to)].push_back(&b);
  std::vector<int> choice(m, -1);
  bool go = true;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (!go) return;
    if (i == m) {
      go = visit(choice);
      return;
    }
    for (int x = 0; x < static_cast<int>(sys.fibers[i].size()) && go; ++x) {
      choice[i] = x;
      bool ok = true;
      for (const Bonding* b : touching[i])
        if (b->map[choice[b->from]] != choice[b->to]) {
          ok = false;
          break;
        }
      if (ok) rec(i + 1);
    }
    choice[i] = -1;
  };
  rec(0);
}

inline std::size_t count_threads(const OrbitSystem& sys) {
  std::size_t n = 0;
  for_each_thread(sys, [&](const std::vector<int>&) {
    ++n;
    return true;
  });
  return n;
}

inline void write_orbit_system(std::ostream& out, const OrbitSystem& sys) {
  auto tuple = [](const Tuple& t) {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
    return s + ")";
  };
  out << "orbit-system " << sys.index.size() << "\n";
  for (std::size_t i = 0; i < sys.index.size(); ++i) {
    out << "fiber " << i << " " << tuple(sys.index[i]) << " raw " << sys.raw[i].size() << " kept "
        << sys.fibers[i].size() << "\n ";
    for (const auto& x : sys.fibers[i]) out << " " << tuple(x);
    out << "\n";
  }
  for (const auto& b : sys.bonding)
    out << "bonding " << b.from << " " << b.to << " drop " << b.dropped << " map " << text::join(b.map) << "\n";
  out << "end\n";
}

}  // namespace sramsey
