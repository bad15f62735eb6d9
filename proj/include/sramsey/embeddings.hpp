#pragma once

#include <functional>
#include <vector>

#include "structure.hpp"

namespace sramsey {

namespace detail {

struct AtomCheck {
  int symbol;
  Tuple tuple;
  bool holds;
};

// For each depth i, every atom over {0..i} that mentions i, with its truth
// value in A. Checking these as points are placed decides the embedding
// condition incrementally.
inline std::vector<std::vector<AtomCheck>> atoms_by_depth(const FinStructure& A) {
  const int n = A.size();
  std::vector<std::vector<AtomCheck>> out(n);
  for (std::size_t s = 0; s < A.signature().size(); ++s) {
    const int k = A.signature()[s].arity;
    for (int depth = 0; depth < n; ++depth) {
      Tuple t(k, 0);
      while (true) {
        if (std::find(t.begin(), t.end(), depth) != t.end())
          out[depth].push_back({static_cast<int>(s), t, A.holds(s, t)});
        int i = k - 1;
        while (i >= 0 && ++t[i] == depth + 1) t[i--] = 0;
        if (i < 0) break;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Calls `visit(map)` for every embedding A -> B in lexicographic order of
/// the map arrays. Stops early when `visit` returns false.
inline void for_each_embedding(const FinStructure& A, const FinStructure& B,
                               const std::function<bool(const std::vector<Point>&)>& visit) {
  if (!(A.signature() == B.signature()))
    throw SignatureMismatch("enumerate_embeddings: signatures differ");
  const int n = A.size(), m = B.size();
  if (n > m) return;
  auto atoms = detail::atoms_by_depth(A);
  std::vector<Point> map(n, -1);
  std::vector<char> used(m, 0);
  Tuple img;
  bool stop = false;
  std::function<void(int)> place = [&](int depth) {
    if (depth == n) {
      if (!visit(map)) stop = true;
      return;
    }
    for (Point b = 0; b < m && !stop; ++b) {
      if (used[b]) continue;
      map[depth] = b;
      bool ok = true;
      for (const auto& atom : atoms[depth]) {
        img.resize(atom.tuple.size());
        for (std::size_t i = 0; i < img.size(); ++i) img[i] = map[atom.tuple[i]];
        if (B.holds(atom.symbol, img) != atom.holds) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      used[b] = 1;
      place(depth + 1);
      used[b] = 0;
    }
    map[depth] = -1;
  };
  place(0);
}

/// All embeddings A -> B, each once, lexicographic in the map arrays.
inline std::vector<Embedding> enumerate_embeddings(const FinStructure& A, const FinStructure& B) {
  std::vector<Embedding> out;
  for_each_embedding(A, B, [&](const std::vector<Point>& map) {
    out.push_back(Embedding::unchecked(A, B, map));
    return true;
  });
  return out;
}

/// Raw map arrays of Emb(A,B), same order as enumerate_embeddings.
inline std::vector<std::vector<Point>> embedding_maps(const FinStructure& A, const FinStructure& B) {
  std::vector<std::vector<Point>> out;
  for_each_embedding(A, B, [&](const std::vector<Point>& map) {
    out.push_back(map);
    return true;
  });
  return out;
}

inline bool embeds(const FinStructure& A, const FinStructure& B) {
  if (!(A.signature() == B.signature())) throw SignatureMismatch("embeds: signatures differ");
  bool found = false;
  for_each_embedding(A, B, [&](const std::vector<Point>&) {
    found = true;
    return false;
  });
  return found;
}

inline std::vector<std::vector<Point>> automorphisms(const FinStructure& S) {
  return embedding_maps(S, S);
}

/// An element of (B choose a): a tuple of B with the quantifier-free type
/// and equality pattern of the base tuple.
struct TupleCopy {
  Tuple base;
  Tuple image;

  friend bool operator==(const TupleCopy&, const TupleCopy&) = default;
};

/// Distinct entries of `a` in order of first occurrence, and for every
/// position of `a` the index of its entry in that list.
struct TuplePattern {
  std::vector<Point> distinct;
  std::vector<int> slot;
};

inline TuplePattern tuple_pattern(const Tuple& a) {
  TuplePattern p;
  for (Point x : a) {
    auto it = std::find(p.distinct.begin(), p.distinct.end(), x);
    if (it == p.distinct.end()) {
      p.slot.push_back(static_cast<int>(p.distinct.size()));
      p.distinct.push_back(x);
    } else {
      p.slot.push_back(static_cast<int>(it - p.distinct.begin()));
    }
  }
  return p;
}

/// The substructure of A generated by the entries of `a`, numbered in order
/// of first occurrence.
inline FinStructure tuple_substructure(const FinStructure& A, const Tuple& a) {
  for (Point x : a)
    if (x < 0 || x >= A.size()) throw PreconditionError("tuple entry out of range");
  return induced_substructure(A, tuple_pattern(a).distinct).first;
}

/// (B choose a) realised through quantifier-free types: all tuples of B with
/// the same equality pattern and atomic diagram as `a`. Ordered by image.
/// When `a` enumerates A injectively this is in bijection with Emb(A,B).
inline std::vector<TupleCopy> copies_of_tuple(const FinStructure& A, const Tuple& a,
                                              const FinStructure& B) {
  if (!(A.signature() == B.signature())) throw SignatureMismatch("copies_of_tuple: signatures differ");
  auto pattern = tuple_pattern(a);
  for (Point x : pattern.distinct)
    if (x < 0 || x >= A.size()) throw PreconditionError("copies_of_tuple: tuple entry out of range");
  auto gen = induced_substructure(A, pattern.distinct).first;
  std::vector<TupleCopy> out;
  for_each_embedding(gen, B, [&](const std::vector<Point>& map) {
    Tuple img(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) img[i] = map[pattern.slot[i]];
    out.push_back({a, std::move(img)});
    return true;
  });
  return out;
}

}  // namespace sramsey
