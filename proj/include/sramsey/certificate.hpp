#pragma once

#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "convex.hpp"
#include "flows.hpp"
#include "fraisse.hpp"
#include "orbit_system.hpp"
#include "ramsey.hpp"
#include "text_format.hpp"

namespace sramsey {

/// A replayable record of one verdict:
///
///   certificate <kind>
///   param <key> <value...>
///   structure ... end          (any number, named)
///   data <key> <values...>     (any number, ordered)
///   verdict <yes|no|unknown>
///   end-certificate
struct Certificate {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<NamedStructure> structures;
  std::vector<std::pair<std::string, std::vector<std::string>>> data;
  std::string verdict = "unknown";

  void set(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }
  void add(std::string name, FinStructure S) { structures.push_back({std::move(name), std::move(S)}); }
  void add_data(std::string key, std::vector<std::string> values) { data.emplace_back(std::move(key), std::move(values)); }
  void add_ints(std::string key, const std::vector<int>& values) {
    std::vector<std::string> v;
    for (int x : values) v.push_back(std::to_string(x));
    add_data(std::move(key), std::move(v));
  }

  bool has(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return true;
    return false;
  }
  const std::string& param(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    throw ParseError(0, "certificate lacks parameter '" + key + "'");
  }
  int int_param(const std::string& key) const {
    auto v = text::to_int(param(key));
    if (!v) throw ParseError(0, "parameter '" + key + "' is not an integer");
    return static_cast<int>(*v);
  }
  bool has_structure(const std::string& name) const {
    for (const auto& s : structures)
      if (s.name == name) return true;
    return false;
  }
  const FinStructure& structure(const std::string& name) const {
    for (const auto& s : structures)
      if (s.name == name) return s.structure;
    throw ParseError(0, "certificate lacks structure '" + name + "'");
  }
  std::vector<const std::vector<std::string>*> all(const std::string& key) const {
    std::vector<const std::vector<std::string>*> out;
    for (const auto& [k, v] : data)
      if (k == key) out.push_back(&v);
    return out;
  }
  const std::vector<std::string>& one(const std::string& key) const {
    auto v = all(key);
    if (v.size() != 1) throw ParseError(0, "certificate needs exactly one '" + key + "' line");
    return *v.front();
  }
};

inline void write_certificate(std::ostream& out, const Certificate& c) {
  out << "certificate " << c.kind << "\n";
  for (const auto& [k, v] : c.params) out << "param " << k << (v.empty() ? "" : " ") << v << "\n";
  for (const auto& s : c.structures) text::write_structure(out, s.name, s.structure);
  for (const auto& [k, v] : c.data) {
    out << "data " << k;
    for (const auto& x : v) out << ' ' << x;
    out << "\n";
  }
  out << "verdict " << c.verdict << "\n";
  out << "end-certificate\n";
}

inline std::string to_string(const Certificate& c) {
  std::ostringstream os;
  write_certificate(os, c);
  return os.str();
}

inline Certificate read_certificate(std::istream& in) {
  text::LineReader r(in);
  auto head = r.expect("'certificate <kind>'");
  if (head[0] != "certificate" || head.size() != 2) throw ParseError(r.line(), "expected 'certificate <kind>'");
  Certificate c;
  c.kind = head[1];
  bool have_verdict = false;
  while (true) {
    auto w = r.expect("'end-certificate'");
    const int line = r.line();
    if (w[0] == "end-certificate") break;
    if (w[0] == "param") {
      if (w.size() < 2) throw ParseError(line, "param needs a key");
      std::vector<std::string> rest(w.begin() + 2, w.end());
      std::string value;
      for (std::size_t i = 0; i < rest.size(); ++i) value += (i ? " " : "") + rest[i];
      c.params.emplace_back(w[1], value);
    } else if (w[0] == "structure") {
      r.push_back();
      c.structures.push_back(text::read_structure(r));
    } else if (w[0] == "data") {
      if (w.size() < 2) throw ParseError(line, "data needs a key");
      c.data.emplace_back(w[1], std::vector<std::string>(w.begin() + 2, w.end()));
    } else if (w[0] == "verdict") {
      if (w.size() != 2 || (w[1] != "yes" && w[1] != "no" && w[1] != "unknown"))
        throw ParseError(line, "verdict must be yes, no or unknown");
      c.verdict = w[1];
      have_verdict = true;
    } else {
      throw ParseError(line, "unexpected '" + w[0] + "' in certificate");
    }
  }
  if (!have_verdict) throw ParseError(r.line(), "certificate has no verdict line");
  return c;
}

inline Certificate parse_certificate(const std::string& s) {
  std::istringstream in(s);
  return read_certificate(in);
}

// ---------------------------------------------------------------------------
// Small encoders

namespace cert {

inline std::string tuple_token(const std::vector<Point>& t) {
  if (t.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s;
}

inline std::vector<Point> parse_tuple_token(const std::string& s) {
  std::vector<Point> out;
  if (s == "-") return out;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    auto v = text::to_int(std::string_view(s).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!v) throw ParseError(0, "bad tuple token '" + s + "'");
    out.push_back(static_cast<Point>(*v));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<int> ints(const std::vector<std::string>& v, std::size_t from = 0) {
  std::vector<int> out;
  for (std::size_t i = from; i < v.size(); ++i) {
    auto x = text::to_int(v[i]);
    if (!x) throw ParseError(0, "expected integer, got '" + v[i] + "'");
    out.push_back(static_cast<int>(*x));
  }
  return out;
}

inline std::string signature_value(const Signature& sig) {
  auto s = text::format_signature(sig);
  return s.size() > 9 ? s.substr(10) : "";
}

inline Signature parse_signature_value(const std::string& v) {
  auto words = text::split_ws(v);
  words.insert(words.begin(), "signature");
  return text::parse_signature(words, 0);
}

inline std::vector<std::string> rationals(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

inline std::vector<Rational> parse_rationals(const std::vector<std::string>& v) {
  std::vector<Rational> out;
  for (const auto& s : v) out.push_back(parse_rational(s));
  return out;
}

}  // namespace cert

// ---------------------------------------------------------------------------
// Builders

inline Certificate arrow_certificate(const FinStructure& A, const FinStructure& B, const FinStructure& C, int r, int k,
                                     const ArrowVerdict& v) {
  Certificate c;
  c.kind = "arrows";
  c.set("colors", std::to_string(r));
  c.set("k", std::to_string(k));
  c.add("A", A);
  c.add("B", B);
  c.add("C", C);
  if (v.bad_coloring) c.add_ints("coloring", *v.bad_coloring);
  c.verdict = to_string(v.kind);
  return c;
}

inline Certificate witness_certificate(const std::string& cls, const FinStructure& A, const FinStructure& B, int r,
                                       int k, const WitnessResult& w) {
  Certificate c;
  c.kind = "witness";
  c.set("class", cls);
  c.set("colors", std::to_string(r));
  c.set("k", std::to_string(k));
  c.set("bound", std::to_string(w.bound));
  c.add("A", A);
  c.add("B", B);
  if (w.C) c.add("C", *w.C);
  if (!w.C && w.largest_refuted) {
    c.add("refuted", *w.largest_refuted);
    c.add_ints("coloring", w.largest_bad_coloring);
  }
  c.verdict = to_string(w.kind);
  return c;
}

inline Certificate degree_certificate(const std::string& cls, const DegreeVerdict& d) {
  Certificate c;
  c.kind = "degree";
  c.set("class", cls);
  c.set("k", std::to_string(d.k));
  c.set("b-size", std::to_string(d.bounds.b_size));
  c.set("colors", std::to_string(d.bounds.colors));
  c.set("c-size", std::to_string(d.bounds.c_size));
  c.add("A", d.A);
  for (std::size_t i = 0; i < d.evidence.size(); ++i) {
    const auto& e = d.evidence[i];
    c.add("B" + std::to_string(i), e.B);
    if (e.C) c.add("C" + std::to_string(i), *e.C);
    c.add_ints("evidence", {static_cast<int>(i), e.colors, e.k, e.C ? 1 : 0});
  }
  if (d.k > 1 && !d.evidence.empty()) {
    const auto& e = d.evidence[d.lower_index];
    c.set("lower", std::to_string(d.lower_index));
    for (std::size_t j = 0; j < e.refutations.size(); ++j) {
      c.add("R" + std::to_string(j), e.refutations[j].first);
      std::vector<int> line{static_cast<int>(j)};
      line.insert(line.end(), e.refutations[j].second.begin(), e.refutations[j].second.end());
      c.add_ints("refutation", line);
    }
  }
  c.verdict = "yes";
  return c;
}

inline Certificate joint_certificate(const std::string& cls, const FinStructure& B,
                                     const std::vector<TupleDegree>& tuples, int r, int bound, const JointResult& j) {
  Certificate c;
  c.kind = "joint-degree";
  c.set("class", cls);
  c.set("colors", std::to_string(r));
  c.set("bound", std::to_string(bound));
  c.add("B", B);
  if (j.C) c.add("C", *j.C);
  for (const auto& t : tuples) c.add_data("tuple", {std::to_string(t.k), cert::tuple_token(t.tuple)});
  c.verdict = to_string(j.kind);
  return c;
}

/// Witnesses for a Yes sweep are listed when there are at most this many
/// colourings; beyond it verification re-solves the LPs.
inline constexpr std::uint64_t ecrp_listed_witnesses = 4096;

inline Certificate ecrp_certificate(const FinStructure& A, const Tuple& a, const FinStructure& B, const FinStructure& C,
                                    int r, const Rational& eps, const EcrpVerdict& v, int workers = 1) {
  Certificate c;
  c.kind = "ecrp";
  c.set("colors", std::to_string(r));
  c.set("epsilon", format_rational(eps));
  c.set("guard", std::to_string(v.guard));
  c.add("A", A);
  c.add("B", B);
  c.add("C", C);
  c.add_data("tuple", {cert::tuple_token(a)});
  if (v.kind == Answer::no) {
    std::vector<int> bits;
    for (const auto& val : v.counterexample->values) bits.insert(bits.end(), val.begin(), val.end());
    c.add_ints("coloring", bits);
    c.add_data("farkas-eq", cert::rationals(v.counterexample_lp.farkas_eq));
    c.add_data("farkas-le", cert::rationals(v.counterexample_lp.farkas_le));
  } else if (v.kind == Answer::yes && v.colorings <= ecrp_listed_witnesses) {
    auto domain = copy_images(A, a, C);
    auto b_copies = embedding_maps(B, C);
    std::vector<std::vector<std::string>> lines(v.colorings);
    parallel_for(v.colorings, workers, [&](std::size_t code) {
      auto w = lp_witness(coloring_from_code(domain, r, code), A, B, C, a, eps);
      std::vector<std::string> line{std::to_string(code)};
      for (std::size_t i = 0; i < w.witness->support.size(); ++i) {
        auto idx = std::lower_bound(b_copies.begin(), b_copies.end(), w.witness->support[i]) - b_copies.begin();
        line.push_back(std::to_string(idx) + ":" + format_rational(w.witness->weights[i]));
      }
      lines[code] = std::move(line);
    });
    for (auto& l : lines) c.add_data("witness", std::move(l));
  }
  c.verdict = to_string(v.kind);
  return c;
}

inline Certificate expansions_certificate(const ExpansionPair& P, const FinStructure& A0, const ExpansionCount& e) {
  Certificate c;
  c.kind = "expansions";
  c.set("reduct-class", P.K0.name);
  c.set("class", P.K.name);
  c.set("count", std::to_string(e.count));
  c.add("A0", A0);
  for (std::size_t i = 0; i < e.expansions.size(); ++i) c.add("E" + std::to_string(i), e.expansions[i]);
  c.verdict = "yes";
  return c;
}

inline Certificate vanthe_certificate(const ExpansionPair& P, const FinStructure& A0, const VantheVerdict& v) {
  Certificate c;
  c.kind = "vanthe";
  c.set("reduct-class", P.K0.name);
  c.set("class", P.K.name);
  c.set("bound", std::to_string(v.bound));
  c.add("A0", A0);
  if (v.B0) c.add("B0", *v.B0);
  c.verdict = to_string(v.kind);
  return c;
}

inline Certificate window_expansion_certificate(const FinStructure& W, const Signature& sig0,
                                                const WindowExpansionVerdict& v) {
  Certificate c;
  c.kind = "window-expansion";
  c.set("side", to_string(v.side));
  c.set("mode", to_string(v.mode));
  c.set("k", std::to_string(v.k));
  c.set("reduct-signature", cert::signature_value(sig0));
  if (!v.refusal.empty()) c.set("refusal", v.refusal);
  c.add("W", W);
  for (const auto& [A, B] : v.witnesses) c.add_data("witness", {cert::tuple_token(A), cert::tuple_token(B)});
  if (v.failing) c.add_data("failing", {cert::tuple_token(*v.failing)});
  c.verdict = to_string(v.kind);
  return c;
}

inline Certificate flow_window_certificate(const FinStructure& W, const Signature& sig0, const FlowWindow& fw) {
  Certificate c;
  c.kind = "flow-window";
  c.set("n", std::to_string(fw.window.size()));
  c.set("reduct-signature", cert::signature_value(sig0));
  c.add("W", W);
  c.add("reduct", fw.window);
  for (std::size_t i = 0; i < fw.points.size(); ++i) c.add("point" + std::to_string(i), fw.points[i]);
  c.verdict = "yes";
  return c;
}

inline Certificate orbit_certificate(const Chain& ch, const OrbitSystem& sys) {
  Certificate c;
  c.kind = "orbit-system";
  c.set("threads", std::to_string(count_threads(sys)));
  for (std::size_t i = 0; i < ch.stages.size(); ++i) c.add("stage" + std::to_string(i), ch.stages[i]);
  for (const auto& inc : ch.inclusions) c.add_ints("inclusion", inc);
  for (std::size_t i = 0; i < sys.index.size(); ++i) {
    std::vector<std::string> line{cert::tuple_token(sys.index[i]), std::to_string(sys.raw[i].size())};
    for (const auto& x : sys.fibers[i]) line.push_back(cert::tuple_token(x));
    c.add_data("fiber", std::move(line));
  }
  for (const auto& b : sys.bonding) {
    std::vector<int> line{static_cast<int>(b.from), static_cast<int>(b.to), b.dropped};
    line.insert(line.end(), b.map.begin(), b.map.end());
    c.add_ints("bonding", line);
  }
  c.verdict = "yes";
  return c;
}

inline Certificate class_certificate(const std::string& cls, int bound, const HpVerdict& hp, const JepVerdict& jep,
                                     const ApVerdict& ap) {
  Certificate c;
  c.kind = "class";
  c.set("class", cls);
  c.set("bound", std::to_string(bound));
  c.add_data("hp", {hp.holds ? "holds" : "fails"});
  if (!hp.holds) {
    c.add("hp-member", *hp.member);
    c.add_data("hp-subset", {cert::tuple_token(hp.subset)});
  }
  c.add_data("jep", {jep.holds ? "holds" : "fails"});
  if (!jep.holds) {
    c.add("jep-A", *jep.A);
    c.add("jep-B", *jep.B);
  }
  c.add_data("ap", {ap.holds ? "holds" : "fails", std::to_string(ap.spans_checked)});
  if (!ap.holds) {
    c.add("ap-A", ap.failing_span->A);
    c.add("ap-B1", ap.failing_span->B1);
    c.add("ap-B2", ap.failing_span->B2);
    c.add_data("ap-maps", {cert::tuple_token(ap.failing_span->f1), cert::tuple_token(ap.failing_span->f2)});
  }
  c.verdict = hp.holds && jep.holds && ap.holds ? "yes" : "no";
  return c;
}

/// A built chain, or (when `ch` is null) the amalgamation failure that
/// stopped the construction.
inline Certificate limit_certificate(const std::string& cls, int steps, int horizon, const Chain* ch,
                                     const std::string& failure = {}) {
  Certificate c;
  c.kind = "limit";
  c.set("class", cls);
  c.set("steps", std::to_string(steps));
  c.set("horizon", std::to_string(horizon));
  if (ch) {
    for (std::size_t i = 0; i < ch->stages.size(); ++i) c.add("stage" + std::to_string(i), ch->stages[i]);
    for (const auto& inc : ch->inclusions) c.add_ints("inclusion", inc);
  } else {
    c.set("failure", failure);
  }
  c.verdict = ch ? "yes" : "no";
  return c;
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyResult {
  bool ok = true;
  std::string message;
};

using ClassResolver = std::function<ClassSpec(const std::string&)>;

namespace detail {

inline VerifyResult fail(std::string m) { return {false, std::move(m)}; }

/// Largest r^N handled by plain enumeration when re-checking a Yes.
inline constexpr std::uint64_t exhaustive_limit = std::uint64_t{1} << 22;

inline bool small_enough(std::size_t vars, int r) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < vars; ++i) {
    total *= static_cast<std::uint64_t>(r);
    if (total > exhaustive_limit) return false;
  }
  return true;
}

/// Yes of "C -> (B)^A_{r,k}" re-checked without the solver when small:
/// every colouring is enumerated and must leave a good B-copy.
inline VerifyResult recheck_arrow_yes(const ArrowSpace& s, int r, int k) {
  const std::size_t n = s.a_copies.size();
  if (r <= k) return {true, "at most k colours exist"};
  if (small_enough(n, r)) {
    std::vector<int> col(n, 0);
    std::uint64_t count = 0;
    while (true) {
      ++count;
      if (!find_good_copy(s, col, k)) return fail("colouring " + text::join(col) + " has no good B-copy");
      std::size_t i = n;
      while (i > 0 && ++col[i - 1] == r) col[--i] = 0;
      if (i == 0) break;
    }
    return {true, "re-enumerated " + std::to_string(count) + " colourings"};
  }
  SearchOptions opt;
  auto v = degree_arrows(s, r, k, opt);
  if (v.kind != Answer::yes) return fail("re-running the search found a bad colouring");
  return {true, "re-ran the colouring search (too many colourings to enumerate)"};
}

inline VerifyResult recheck_bad(const ArrowSpace& s, int r, int k, const std::vector<int>& col) {
  auto why = bad_coloring_violation(s, r, k, col);
  if (!why.empty()) return fail(why);
  return {true, "bad colouring re-checked"};
}

inline VerifyResult verify_arrows(const Certificate& c) {
  const int r = c.int_param("colors"), k = c.int_param("k");
  auto s = ArrowSpace::build(c.structure("A"), c.structure("B"), c.structure("C"));
  if (c.verdict == "no") return recheck_bad(s, r, k, cert::ints(c.one("coloring")));
  if (c.verdict == "yes") return recheck_arrow_yes(s, r, k);
  return {true, "unknown verdict makes no claim"};
}

inline VerifyResult verify_witness(const Certificate& c, const ClassResolver& resolve) {
  const int r = c.int_param("colors"), k = c.int_param("k");
  const auto& A = c.structure("A");
  const auto& B = c.structure("B");
  if (c.verdict == "yes") {
    const auto& C = c.structure("C");
    auto K = resolve(c.param("class"));
    if (!K.contains(C)) return fail("C is not a member of " + K.name);
    if (C.size() > c.int_param("bound")) return fail("C exceeds the stated bound");
    return recheck_arrow_yes(ArrowSpace::build(A, B, C), r, k);
  }
  if (c.verdict == "no") return fail("a witness search never answers no");
  if (c.has_structure("refuted"))
    return recheck_bad(ArrowSpace::build(A, B, c.structure("refuted")), r, k, cert::ints(c.one("coloring")));
  return {true, "unknown verdict makes no claim"};
}

inline VerifyResult verify_degree(const Certificate& c, const ClassResolver& resolve) {
  const int k = c.int_param("k");
  const auto& A = c.structure("A");
  int best = 0;
  for (const auto* e : c.all("evidence")) {
    auto f = cert::ints(*e);
    if (f.size() != 4) return fail("malformed evidence line");
    const auto& B = c.structure("B" + std::to_string(f[0]));
    if (!f[3]) continue;
    auto res = recheck_arrow_yes(ArrowSpace::build(A, B, c.structure("C" + std::to_string(f[0]))), f[1], f[2]);
    if (!res.ok) return fail("evidence " + std::to_string(f[0]) + ": " + res.message);
    best = std::max(best, f[2]);
  }
  if (std::max(best, 1) != k) return fail("stated degree differs from the evidence maximum");
  if (k == 1) return {true, "upper evidence re-checked; k = 1"};
  const int lower = c.int_param("lower");
  const std::vector<std::string>* entry = nullptr;
  for (const auto* e : c.all("evidence"))
    if (cert::ints(*e)[0] == lower) entry = e;
  if (!entry) return fail("lower evidence index not found");
  const int r = cert::ints(*entry)[1];
  const auto& B = c.structure("B" + std::to_string(lower));
  std::set<std::vector<int>> refuted;
  for (const auto* line : c.all("refutation")) {
    auto f = cert::ints(*line);
    const auto& R = c.structure("R" + std::to_string(f[0]));
    std::vector<int> col(f.begin() + 1, f.end());
    auto res = recheck_bad(ArrowSpace::build(A, B, R), r, k - 1, col);
    if (!res.ok) return fail("refutation " + std::to_string(f[0]) + ": " + res.message);
    refuted.insert(canonical_key(R));
  }
  // Every candidate within the bound must be refuted for the lower bound.
  auto K = resolve(c.param("class"));
  for (int n = B.size(); n <= c.int_param("c-size"); ++n)
    for (const auto& C : K.members_of_size(n))
      if (embeds(B, C) && !refuted.count(canonical_key(C)))
        return fail("a candidate of size " + std::to_string(n) + " has no refutation at k-1");
  return {true, "upper evidence and lower refutations re-checked"};
}

inline VerifyResult verify_joint(const Certificate& c, const ClassResolver& resolve) {
  if (c.verdict != "yes") return {true, "unknown verdict makes no claim"};
  const int r = c.int_param("colors");
  const auto& B = c.structure("B");
  const auto& C = c.structure("C");
  auto K = resolve(c.param("class"));
  if (!K.contains(C)) return fail("C is not a member of " + K.name);
  std::vector<TupleDegree> tuples;
  for (const auto* t : c.all("tuple")) {
    if (t->size() != 2) return fail("malformed tuple line");
    tuples.push_back({cert::parse_tuple_token((*t)[1]), cert::ints({(*t)[0]})[0]});
  }
  auto space = JointSpace::build(B, tuples, C, r, false);
  if (small_enough(static_cast<std::size_t>(space.problem.num_vars), r)) {
    bool bad_found = false;
    for_each_solution(space.problem, [&](const std::vector<int>&) {
      bad_found = true;
      return false;
    });
    if (bad_found) return fail("a joint colouring leaves no good B-copy");
    return {true, "joint colourings re-enumerated"};
  }
  if (find_solution(space.problem, {}).solution) return fail("a joint colouring leaves no good B-copy");
  return {true, "joint search re-run"};
}

inline VerifyResult verify_ecrp(const Certificate& c) {
  const int r = c.int_param("colors");
  const Rational eps = parse_rational(c.param("epsilon"));
  const auto& A = c.structure("A");
  const auto& B = c.structure("B");
  const auto& C = c.structure("C");
  const Tuple a = cert::parse_tuple_token(c.one("tuple").at(0));
  auto domain = copy_images(A, a, C);
  if (c.verdict == "no") {
    auto bits = cert::ints(c.one("coloring"));
    if (bits.size() != domain.size() * static_cast<std::size_t>(r)) return fail("colouring has the wrong length");
    VectorColoring col{domain, r, std::vector<std::vector<int>>(domain.size(), std::vector<int>(r))};
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != 0 && bits[i] != 1) return fail("colouring entries must be 0 or 1");
      col.values[i / r][i % r] = bits[i];
    }
    auto bs = balance_system(col, A, a, B, C, eps);
    auto why = farkas_violation(bs.lp, cert::parse_rationals(c.one("farkas-eq")), cert::parse_rationals(c.one("farkas-le")));
    if (!why.empty()) return fail("infeasibility certificate: " + why);
    return {true, "Farkas certificate re-checked"};
  }
  if (c.verdict == "unknown") return {true, "unknown verdict makes no claim"};
  const std::size_t bits = domain.size() * static_cast<std::size_t>(r);
  const std::uint64_t total = std::uint64_t{1} << bits;
  auto lines = c.all("witness");
  auto b_copies = embedding_maps(B, C);
  if (lines.empty()) {
    for (std::uint64_t code = 0; code < total; ++code)
      if (!lp_witness(coloring_from_code(domain, r, code), A, B, C, a, eps).feasible)
        return fail("colouring " + std::to_string(code) + " admits no balanced combination");
    return {true, "re-solved " + std::to_string(total) + " LPs"};
  }
  if (lines.size() != total) return fail("expected one witness per colouring");
  for (std::uint64_t code = 0; code < total; ++code) {
    const auto& line = *lines[code];
    if (line.empty() || line[0] != std::to_string(code)) return fail("witness lines out of order");
    AffineWitness w;
    for (std::size_t i = 1; i < line.size(); ++i) {
      auto colon = line[i].find(':');
      if (colon == std::string::npos) return fail("malformed witness entry '" + line[i] + "'");
      auto idx = text::to_int(line[i].substr(0, colon));
      if (!idx || *idx < 0 || *idx >= static_cast<long long>(b_copies.size())) return fail("bad support index");
      w.support.push_back(b_copies[*idx]);
      w.weights.push_back(parse_rational(line[i].substr(colon + 1)));
    }
    auto why = balance_violation(coloring_from_code(domain, r, code), A, a, B, C, eps, w);
    if (!why.empty()) return fail("colouring " + std::to_string(code) + ": " + why);
  }
  return {true, "every witness re-substituted exactly"};
}

inline ExpansionPair resolve_pair(const Certificate& c, const ClassResolver& resolve) {
  return ExpansionPair::make(resolve(c.param("reduct-class")), resolve(c.param("class")));
}

inline VerifyResult verify_expansions(const Certificate& c, const ClassResolver& resolve) {
  auto P = resolve_pair(c, resolve);
  const auto& A0 = c.structure("A0");
  const int count = c.int_param("count");
  std::set<std::vector<int>> keys;
  for (int i = 0; i < count; ++i) {
    const auto& E = c.structure("E" + std::to_string(i));
    if (!(reduct(E, P.sig0) == A0)) return fail("E" + std::to_string(i) + " is not an expansion of A0");
    if (!P.K.contains(E)) return fail("E" + std::to_string(i) + " is not in " + P.K.name);
    if (!keys.insert(canonical_key(E)).second) return fail("E" + std::to_string(i) + " repeats an isomorphism type");
  }
  std::set<std::vector<int>> oracle;
  for (const auto& E : labelled_expansions(A0, P)) oracle.insert(canonical_key(E));
  if (oracle != keys) return fail("listed expansions differ from the labelled enumeration");
  return {true, "expansions re-enumerated over all table assignments"};
}

inline VerifyResult verify_vanthe(const Certificate& c, const ClassResolver& resolve) {
  if (c.verdict != "yes") return {true, "unknown verdict makes no claim"};
  auto P = resolve_pair(c, resolve);
  const auto& A0 = c.structure("A0");
  const auto& B0 = c.structure("B0");
  if (!P.K0.contains(B0)) return fail("B0 is not in " + P.K0.name);
  for (const auto& a : labelled_expansions(A0, P))
    for (const auto& b : labelled_expansions(B0, P))
      if (!embeds(a, b)) return fail("an expansion of A0 does not embed into an expansion of B0");
  return {true, "all labelled expansion pairs re-checked"};
}

inline VerifyResult verify_window_expansion(const Certificate& c) {
  const auto& W = c.structure("W");
  const auto sig0 = cert::parse_signature_value(c.param("reduct-signature"));
  ExpansionSide side = c.param("side") == "right" ? ExpansionSide::right
                       : c.param("side") == "left" ? ExpansionSide::left
                                                   : ExpansionSide::two_sided;
  WindowMode mode = c.param("mode") == "automorphisms" ? WindowMode::automorphisms : WindowMode::partial_isomorphisms;
  auto v = check_window_expansion(W, sig0, side, c.int_param("k"), mode);
  if (to_string(v.kind) != c.verdict) return fail("recomputed verdict is " + std::string(to_string(v.kind)));
  auto lines = c.all("witness");
  if (lines.size() != v.witnesses.size()) return fail("witness list differs from recomputation");
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (cert::parse_tuple_token(lines[i]->at(0)) != v.witnesses[i].first ||
        cert::parse_tuple_token(lines[i]->at(1)) != v.witnesses[i].second)
      return fail("witness " + std::to_string(i) + " differs from recomputation");
  return {true, "window verdict recomputed"};
}

inline VerifyResult verify_flow_window(const Certificate& c) {
  const auto sig0 = cert::parse_signature_value(c.param("reduct-signature"));
  auto fw = minimal_flow_window(c.structure("W"), sig0, c.int_param("n"));
  if (!(fw.window == c.structure("reduct"))) return fail("reduct window differs");
  std::size_t listed = 0;
  while (c.has_structure("point" + std::to_string(listed))) ++listed;
  if (listed != fw.points.size()) return fail("point count differs from recomputation");
  for (std::size_t i = 0; i < listed; ++i)
    if (!(fw.points[i] == c.structure("point" + std::to_string(i)))) return fail("point " + std::to_string(i) + " differs");
  return {true, "orbit restrictions recomputed"};
}

inline VerifyResult verify_orbit(const Certificate& c) {
  Chain ch;
  while (c.has_structure("stage" + std::to_string(ch.stages.size())))
    ch.stages.push_back(c.structure("stage" + std::to_string(ch.stages.size())));
  for (const auto* inc : c.all("inclusion")) ch.inclusions.push_back(cert::ints(*inc));
  std::vector<Tuple> family;
  for (const auto* f : c.all("fiber")) family.push_back(cert::parse_tuple_token(f->at(0)));
  auto sys = build_orbit_system(ch, family);
  if (auto why = orbit_system_violation(sys); !why.empty()) return fail(why);
  auto fibers = c.all("fiber");
  if (fibers.size() != sys.index.size()) return fail("fiber count differs");
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    const auto& line = *fibers[i];
    if (line.size() != sys.fibers[i].size() + 2 || cert::ints({line[1]})[0] != static_cast<int>(sys.raw[i].size()))
      return fail("fiber " + std::to_string(i) + " differs from recomputation");
    for (std::size_t j = 0; j < sys.fibers[i].size(); ++j)
      if (cert::parse_tuple_token(line[j + 2]) != sys.fibers[i][j]) return fail("fiber " + std::to_string(i) + " differs");
  }
  auto bonds = c.all("bonding");
  if (bonds.size() != sys.bonding.size()) return fail("bonding count differs");
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    auto f = cert::ints(*bonds[i]);
    const auto& b = sys.bonding[i];
    std::vector<int> expect{static_cast<int>(b.from), static_cast<int>(b.to), b.dropped};
    expect.insert(expect.end(), b.map.begin(), b.map.end());
    if (f != expect) return fail("bonding " + std::to_string(i) + " differs");
  }
  if (c.int_param("threads") != static_cast<int>(count_threads(sys))) return fail("thread count differs");
  return {true, "inverse system rebuilt; bonding maps surjective and commuting"};
}

inline VerifyResult verify_class(const Certificate& c, const ClassResolver& resolve) {
  auto K = resolve(c.param("class"));
  K.size_bound = c.int_param("bound");
  const bool all_hold = c.one("hp").at(0) == "holds" && c.one("jep").at(0) == "holds" && c.one("ap").at(0) == "holds";
  if ((c.verdict == "yes") != all_hold) return fail("verdict disagrees with the axiom lines");
  if (c.one("hp").at(0) == "fails") {
    const auto& B = c.structure("hp-member");
    auto sub = cert::parse_tuple_token(c.one("hp-subset").at(0));
    if (!K.contains(B) || K.contains(induced_substructure(B, sub).first)) return fail("HP counterexample does not re-check");
  } else if (!check_hp(K).holds) {
    return fail("HP fails on recomputation");
  }
  if (c.one("jep").at(0) == "fails") {
    if (joint_embedding(c.structure("jep-A"), c.structure("jep-B"), K).amalgam) return fail("JEP pair has a joint embedding");
  } else if (!check_jep(K).holds) {
    return fail("JEP fails on recomputation");
  }
  if (c.one("ap").at(0) == "fails") {
    const auto& maps = c.one("ap-maps");
    auto f1 = cert::parse_tuple_token(maps.at(0)), f2 = cert::parse_tuple_token(maps.at(1));
    const auto &A = c.structure("ap-A"), &B1 = c.structure("ap-B1"), &B2 = c.structure("ap-B2");
    if (!embedding_violation(A, B1, f1).empty() || !embedding_violation(A, B2, f2).empty())
      return fail("AP span maps are not embeddings");
    if (amalgamate(A, B1, B2, f1, f2, K).amalgam) return fail("AP span has an amalgam");
  } else if (!check_ap(K).holds) {
    return fail("AP fails on recomputation");
  }
  return {true, "counterexamples re-checked; holding axioms recomputed"};
}

inline VerifyResult verify_limit(const Certificate& c, const ClassResolver& resolve) {
  auto K = resolve(c.param("class"));
  if (c.verdict == "no") {
    try {
      build_limit_approximant(K, c.int_param("steps"), c.int_param("horizon"));
    } catch (const AmalgamationFailure&) {
      return {true, "construction fails again on replay"};
    }
    return fail("construction succeeds on replay");
  }
  Chain ch;
  while (c.has_structure("stage" + std::to_string(ch.stages.size())))
    ch.stages.push_back(c.structure("stage" + std::to_string(ch.stages.size())));
  for (const auto* inc : c.all("inclusion")) ch.inclusions.push_back(cert::ints(*inc));
  if (auto why = chain_violation(ch); !why.empty()) return fail(why);
  const int horizon = c.int_param("horizon");
  for (std::size_t i = 0; i < ch.stages.size(); ++i) {
    if (!K.contains(ch.stages[i])) return fail("stage " + std::to_string(i) + " is not a member");
    if (i == 0) continue;
    auto v = check_extension_property(ch.stages[i], K, horizon, ch.inclusions[i - 1]);
    if (!v.holds) return fail("stage " + std::to_string(i) + " misses an extension over the previous stage");
  }
  return {true, "chain, membership and extension property re-checked"};
}

}  // namespace detail

inline VerifyResult verify_certificate(const Certificate& c, const ClassResolver& resolve) {
  try {
    if (c.kind == "arrows") return detail::verify_arrows(c);
    if (c.kind == "witness") return detail::verify_witness(c, resolve);
    if (c.kind == "degree") return detail::verify_degree(c, resolve);
    if (c.kind == "joint-degree") return detail::verify_joint(c, resolve);
    if (c.kind == "ecrp") return detail::verify_ecrp(c);
    if (c.kind == "expansions") return detail::verify_expansions(c, resolve);
    if (c.kind == "vanthe") return detail::verify_vanthe(c, resolve);
    if (c.kind == "window-expansion") return detail::verify_window_expansion(c);
    if (c.kind == "flow-window") return detail::verify_flow_window(c);
    if (c.kind == "orbit-system") return detail::verify_orbit(c);
    if (c.kind == "class") return detail::verify_class(c, resolve);
    if (c.kind == "limit") return detail::verify_limit(c, resolve);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    return detail::fail(e.what());
  }
  return detail::fail("unknown certificate kind '" + c.kind + "'");
}

}  // namespace sramsey
