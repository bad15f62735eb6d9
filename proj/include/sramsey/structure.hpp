#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sramsey {

using Point = int;
using Tuple = std::vector<Point>;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SignatureMismatch : public Error {
public:
  using Error::Error;
};

class InvalidStructure : public Error {
public:
  using Error::Error;
};

/// A caller violated the documented precondition of an operation.
class PreconditionError : public Error {
public:
  using Error::Error;
};

struct Symbol {
  std::string name;
  int arity = 1;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Ordered list of relation symbols. Order is part of identity.
class Signature {
public:
  Signature() = default;

  explicit Signature(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (symbols_[i].arity < 1)
        throw InvalidStructure("symbol '" + symbols_[i].name + "' must have arity >= 1");
      if (symbols_[i].name.empty())
        throw InvalidStructure("empty symbol name");
      for (std::size_t j = 0; j < i; ++j)
        if (symbols_[j].name == symbols_[i].name)
          throw InvalidStructure("duplicate symbol '" + symbols_[i].name + "'");
    }
  }

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<Symbol>& symbols() const { return symbols_; }
  auto begin() const { return symbols_.begin(); }
  auto end() const { return symbols_.end(); }

  /// Index of the symbol called `name`, or -1.
  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < symbols_.size(); ++i)
      if (symbols_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  /// True when every symbol of *this occurs in `other` with the same arity.
  bool is_subsignature_of(const Signature& other) const {
    for (const auto& s : symbols_) {
      int j = other.index_of(s.name);
      if (j < 0 || other[j].arity != s.arity) return false;
    }
    return true;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

private:
  std::vector<Symbol> symbols_;
};

/// A finite relational structure on {0,...,n-1}.
///
/// Values are immutable and cheap to copy: the tables live behind a shared
/// pointer. Membership queries are O(1) through a dense indicator whenever
/// n^arity is small, and fall back to binary search otherwise.
class FinStructure {
public:
  using Table = std::vector<Tuple>;

  FinStructure() : FinStructure(Signature{}, 0) {}

  FinStructure(Signature sig, int size) : FinStructure(sig, size, std::vector<Table>(sig.size())) {}

  FinStructure(Signature sig, int size, std::vector<Table> tables) {
    if (size < 0) throw InvalidStructure("negative structure size");
    if (tables.size() != sig.size())
      throw InvalidStructure("table count does not match signature");
    auto rep = std::make_shared<Rep>();
    rep->size = size;
    for (std::size_t s = 0; s < sig.size(); ++s) {
      auto& table = tables[s];
      for (const auto& t : table) {
        if (static_cast<int>(t.size()) != sig[s].arity)
          throw InvalidStructure("tuple of wrong arity in table '" + sig[s].name + "'");
        for (Point p : t)
          if (p < 0 || p >= size)
            throw InvalidStructure("point " + std::to_string(p) + " out of range in table '" +
                                   sig[s].name + "'");
      }
      std::sort(table.begin(), table.end());
      if (std::adjacent_find(table.begin(), table.end()) != table.end())
        throw InvalidStructure("duplicate tuple in table '" + sig[s].name + "'");
    }
    rep->sig = std::move(sig);
    rep->tables = std::move(tables);
    rep->build_index();
    rep_ = std::move(rep);
  }

  const Signature& signature() const { return rep_->sig; }
  int size() const { return rep_->size; }
  const Table& table(std::size_t symbol) const { return rep_->tables[symbol]; }
  const std::vector<Table>& tables() const { return rep_->tables; }

  /// Does relation `symbol` hold of `t`? Entries must be in range.
  template <class Range>
  bool holds(std::size_t symbol, const Range& t) const {
    return rep_->holds(symbol, t);
  }

  /// Same storage (fast path for equality checks).
  bool same_object(const FinStructure& other) const { return rep_ == other.rep_; }

  friend bool operator==(const FinStructure& a, const FinStructure& b) {
    if (a.rep_ == b.rep_) return true;
    return a.size() == b.size() && a.signature() == b.signature() && a.tables() == b.tables();
  }

private:
  struct Rep {
    Signature sig;
    int size = 0;
    std::vector<Table> tables;
    std::vector<std::vector<char>> dense;  // empty when the table is too big to index

    static constexpr std::uint64_t kDenseLimit = 1u << 20;

    void build_index() {
      dense.resize(sig.size());
      for (std::size_t s = 0; s < sig.size(); ++s) {
        std::uint64_t cells = 1;
        bool fits = true;
        for (int i = 0; i < sig[s].arity; ++i) {
          cells *= static_cast<std::uint64_t>(std::max(size, 1));
          if (cells > kDenseLimit) { fits = false; break; }
        }
        if (!fits) continue;
        dense[s].assign(cells, 0);
        for (const auto& t : tables[s]) dense[s][offset(t)] = 1;
      }
    }

    template <class Range>
    std::size_t offset(const Range& t) const {
      std::size_t idx = 0;
      for (auto p : t) idx = idx * static_cast<std::size_t>(size) + static_cast<std::size_t>(p);
      return idx;
    }

    template <class Range>
    bool holds(std::size_t s, const Range& t) const {
      if (!dense[s].empty()) return dense[s][offset(t)] != 0;
      Tuple key(std::begin(t), std::end(t));
      return std::binary_search(tables[s].begin(), tables[s].end(), key);
    }
  };

  std::shared_ptr<const Rep> rep_;
};

/// The structure obtained by moving point p to relabel[p].
/// `relabel` must be a permutation of {0,...,S.size()-1}.
inline FinStructure relabel(const FinStructure& S, const std::vector<Point>& perm) {
  if (static_cast<int>(perm.size()) != S.size())
    throw PreconditionError("relabel: permutation length differs from structure size");
  std::vector<FinStructure::Table> tables(S.signature().size());
  for (std::size_t s = 0; s < tables.size(); ++s) {
    tables[s].reserve(S.table(s).size());
    for (const auto& t : S.table(s)) {
      Tuple u(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) u[i] = perm[t[i]];
      tables[s].push_back(std::move(u));
    }
  }
  return FinStructure(S.signature(), S.size(), std::move(tables));
}

inline bool is_permutation_of_range(const std::vector<Point>& perm, int n) {
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<char> seen(n, 0);
  for (Point p : perm) {
    if (p < 0 || p >= n || seen[p]) return false;
    seen[p] = 1;
  }
  return true;
}

/// Same universe, tables restricted to the symbols of `sig0`.
inline FinStructure reduct(const FinStructure& S, const Signature& sig0) {
  if (!sig0.is_subsignature_of(S.signature()))
    throw SignatureMismatch("reduct: target signature is not a subsignature");
  std::vector<FinStructure::Table> tables;
  tables.reserve(sig0.size());
  for (const auto& sym : sig0) tables.push_back(S.table(S.signature().index_of(sym.name)));
  return FinStructure(sig0, S.size(), std::move(tables));
}

/// Joins a reduct with tables for the remaining symbols of `sig`.
/// `extra` is indexed like the symbols of `sig` absent from `base.signature()`.
inline FinStructure expand(const FinStructure& base, const Signature& sig,
                           const std::vector<FinStructure::Table>& extra) {
  if (!base.signature().is_subsignature_of(sig))
    throw SignatureMismatch("expand: base signature is not a subsignature");
  std::vector<FinStructure::Table> tables(sig.size());
  std::size_t next_extra = 0;
  for (std::size_t s = 0; s < sig.size(); ++s) {
    int j = base.signature().index_of(sig[s].name);
    if (j >= 0) {
      tables[s] = base.table(j);
    } else {
      if (next_extra >= extra.size()) throw PreconditionError("expand: missing extra table");
      tables[s] = extra[next_extra++];
    }
  }
  return FinStructure(sig, base.size(), std::move(tables));
}

/// Symbols of `sig` not in `sig0`, in `sig` order.
inline Signature signature_difference(const Signature& sig, const Signature& sig0) {
  std::vector<Symbol> out;
  for (const auto& s : sig)
    if (sig0.index_of(s.name) < 0) out.push_back(s);
  return Signature(std::move(out));
}

/// An injective map src -> dst preserving and reflecting every relation.
class Embedding {
public:
  Embedding() = default;

  /// Validates the embedding condition; throws InvalidStructure otherwise.
  static Embedding checked(FinStructure src, FinStructure dst, std::vector<Point> map);

  /// Trusted construction for maps produced by the enumerators.
  static Embedding unchecked(FinStructure src, FinStructure dst, std::vector<Point> map) {
    Embedding e;
    e.src_ = std::move(src);
    e.dst_ = std::move(dst);
    e.map_ = std::move(map);
    return e;
  }

  static Embedding identity(const FinStructure& S) {
    std::vector<Point> m(S.size());
    for (int i = 0; i < S.size(); ++i) m[i] = i;
    return unchecked(S, S, std::move(m));
  }

  const FinStructure& src() const { return src_; }
  const FinStructure& dst() const { return dst_; }
  const std::vector<Point>& map() const { return map_; }
  Point operator()(Point p) const { return map_[p]; }

  Tuple apply(const Tuple& t) const {
    Tuple out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = map_[t[i]];
    return out;
  }

  friend bool operator==(const Embedding& a, const Embedding& b) {
    return a.map_ == b.map_ && a.src_ == b.src_ && a.dst_ == b.dst_;
  }

private:
  FinStructure src_, dst_;
  std::vector<Point> map_;
};

/// Checks injectivity, range, and the preserve-and-reflect condition.
/// Returns an empty string when `map` is an embedding, otherwise a reason.
inline std::string embedding_violation(const FinStructure& src, const FinStructure& dst,
                                       const std::vector<Point>& map) {
  if (!(src.signature() == dst.signature())) return "signature mismatch";
  if (static_cast<int>(map.size()) != src.size()) return "map length differs from source size";
  std::vector<char> used(dst.size(), 0);
  for (Point p : map) {
    if (p < 0 || p >= dst.size()) return "image point out of range";
    if (used[p]) return "map is not injective";
    used[p] = 1;
  }
  const int n = src.size();
  for (std::size_t s = 0; s < src.signature().size(); ++s) {
    const int k = src.signature()[s].arity;
    if (n == 0) break;
    Tuple t(k, 0), u(k);
    while (true) {
      for (int i = 0; i < k; ++i) u[i] = map[t[i]];
      if (src.holds(s, t) != dst.holds(s, u))
        return "relation '" + src.signature()[s].name + "' not preserved or not reflected";
      int i = k - 1;
      while (i >= 0 && ++t[i] == n) t[i--] = 0;
      if (i < 0) break;
    }
  }
  return {};
}

inline Embedding Embedding::checked(FinStructure src, FinStructure dst, std::vector<Point> map) {
  if (!(src.signature() == dst.signature()))
    throw SignatureMismatch("embedding between structures of different signatures");
  auto why = embedding_violation(src, dst, map);
  if (!why.empty()) throw InvalidStructure("not an embedding: " + why);
  return unchecked(std::move(src), std::move(dst), std::move(map));
}

/// f o g : A -> C for g : A -> B and f : B -> C.
inline Embedding compose(const Embedding& f, const Embedding& g) {
  if (!(g.dst() == f.src())) throw PreconditionError("compose: codomain of g is not the domain of f");
  std::vector<Point> m(g.map().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = f.map()[g.map()[i]];
  return Embedding::unchecked(g.src(), f.dst(), std::move(m));
}

/// Structure induced on `points` (in the given order) plus its inclusion into B.
inline std::pair<FinStructure, Embedding> induced_substructure(const FinStructure& B,
                                                               const std::vector<Point>& points) {
  std::vector<int> where(B.size(), -1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Point p = points[i];
    if (p < 0 || p >= B.size())
      throw PreconditionError("induced_substructure: point " + std::to_string(p) + " out of range");
    if (where[p] >= 0) throw PreconditionError("induced_substructure: repeated point");
    where[p] = static_cast<int>(i);
  }
  std::vector<FinStructure::Table> tables(B.signature().size());
  for (std::size_t s = 0; s < tables.size(); ++s) {
    for (const auto& t : B.table(s)) {
      Tuple u(t.size());
      bool inside = true;
      for (std::size_t i = 0; i < t.size() && inside; ++i) {
        if (where[t[i]] < 0) inside = false;
        else u[i] = where[t[i]];
      }
      if (inside) tables[s].push_back(std::move(u));
    }
  }
  FinStructure sub(B.signature(), static_cast<int>(points.size()), std::move(tables));
  auto inclusion = Embedding::unchecked(sub, B, points);
  return {std::move(sub), std::move(inclusion)};
}

/// Disjoint union with B's points shifted after A's.
inline FinStructure disjoint_union(const FinStructure& A, const FinStructure& B) {
  if (!(A.signature() == B.signature())) throw SignatureMismatch("disjoint_union: signatures differ");
  std::vector<FinStructure::Table> tables = A.tables();
  for (std::size_t s = 0; s < tables.size(); ++s)
    for (auto t : B.table(s)) {
      for (auto& p : t) p += A.size();
      tables[s].push_back(std::move(t));
    }
  return FinStructure(A.signature(), A.size() + B.size(), std::move(tables));
}

}  // namespace sramsey
