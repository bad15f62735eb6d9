// Command-line front end: one subcommand per verdict kind plus `verify`.
//
// Exit codes: 0 yes/holds, 1 no/fails, 2 unknown, 64 usage, 65 input format.
// The last line on stdout is always `VERDICT <yes|no|unknown>` when a verdict
// was reached. Certificates never contain timing; timing goes to the stats
// file.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sramsey/sramsey.hpp"

namespace {

using namespace sramsey;

constexpr int exit_yes = 0, exit_no = 1, exit_unknown = 2, exit_usage = 64, exit_format = 65;

struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(what) {}
};

struct Common {
  int workers = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string stats;
  std::string catalog;
};

// Class lookup: built-ins first, then the user catalog.
class Classes {
public:
  explicit Classes(const std::string& catalog_path) {
    if (catalog_path.empty()) return;
    std::ifstream in(catalog_path);
    if (!in) throw UsageError("cannot open catalog '" + catalog_path + "'");
    for (auto& K : catalog::read_catalog(in)) user_.emplace(K.name, std::move(K));
  }

  ClassSpec get(const std::string& name) const {
    if (auto it = user_.find(name); it != user_.end()) return it->second;
    for (const auto& b : catalog::builtin_names())
      if (b == name) return catalog::builtin(name);
    throw UsageError("unknown class '" + name + "'");
  }

  ClassResolver resolver() const {
    return [this](const std::string& n) { return get(n); };
  }

private:
  std::map<std::string, ClassSpec> user_;
};

/// Structure arguments: an integer n (the unique member of size n), a graph
/// shorthand K<n>, E<n>, P<n>, C<n> (naturally ordered in ordered classes),
/// or file:<path>[#name].
FinStructure resolve_structure(const std::string& spec, const ClassSpec& K, const char* role) {
  FinStructure S;
  if (spec.rfind("file:", 0) == 0) {
    auto rest = spec.substr(5);
    auto hash = rest.find('#');
    std::string path = rest.substr(0, hash), name = hash == std::string::npos ? "" : rest.substr(hash + 1);
    std::ifstream in(path);
    if (!in) throw UsageError(std::string(role) + ": cannot open '" + path + "'");
    auto all = text::read_structures(in);
    bool found = false;
    for (auto& ns : all)
      if (name.empty() || ns.name == name) {
        S = ns.structure;
        found = true;
        break;
      }
    if (!found) throw UsageError(std::string(role) + ": no structure '" + name + "' in '" + path + "'");
  } else if (auto n = text::to_int(spec)) {
    auto level = K.members_of_size(static_cast<int>(*n));
    if (level.size() != 1)
      throw UsageError(std::string(role) + ": class '" + K.name + "' has " + std::to_string(level.size()) +
                       " members of size " + spec + "; name one explicitly");
    S = level.front();
  } else if (spec.size() >= 2 && std::string("KEPC").find(spec[0]) != std::string::npos) {
    auto n = text::to_int(spec.substr(1));
    if (!n || *n < 0) throw UsageError(std::string(role) + ": bad structure '" + spec + "'");
    const int m = static_cast<int>(*n);
    switch (spec[0]) {
      case 'K': S = catalog::complete_graph(m); break;
      case 'E': S = catalog::edgeless_graph(m); break;
      case 'P': S = catalog::path_graph(m); break;
      default: S = catalog::cycle_graph(m); break;
    }
    if (K.sig == catalog::ordered_graph_sig()) S = catalog::with_natural_order(S);
  } else {
    throw UsageError(std::string(role) + ": cannot interpret '" + spec + "'");
  }
  if (!(S.signature() == K.sig)) throw UsageError(std::string(role) + ": signature differs from class '" + K.name + "'");
  if (!K.contains(S)) throw UsageError(std::string(role) + " is not a member of '" + K.name + "'");
  return S;
}

Tuple parse_tuple(const std::string& s, const char* role) {
  try {
    return cert::parse_tuple_token(s);
  } catch (const ParseError&) {
    throw UsageError(std::string(role) + ": bad tuple '" + s + "'");
  }
}

Tuple identity_tuple(int n) {
  Tuple t(n);
  for (int i = 0; i < n; ++i) t[i] = i;
  return t;
}

class Run {
public:
  Run(const Common& common, std::string command) : c_(common), command_(std::move(command)) {
    t0_ = std::chrono::steady_clock::now();
  }

  void stat(const std::string& key, nlohmann::json value) { stats_[key] = std::move(value); }

  /// Writes the certificate and stats, prints the verdict line, and
  /// returns the exit code.
  int finish(const Certificate& cert, const std::string& summary) {
    const std::string path = c_.out.empty() ? command_ + ".cert" : c_.out;
    {
      std::ofstream f(path, std::ios::binary);
      if (!f) throw UsageError("cannot write certificate '" + path + "'");
      write_certificate(f, cert);
    }
    stats_["command"] = command_;
    stats_["workers"] = c_.workers;
    stats_["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    const std::string stats_path = c_.stats.empty() ? path + ".stats.json" : c_.stats;
    std::ofstream(stats_path) << stats_.dump(2) << "\n";
    std::cout << summary << "\n";
    std::cout << "certificate " << path << "\n";
    return verdict(cert.verdict);
  }

  static int verdict(const std::string& v) {
    std::cout << "VERDICT " << v << std::endl;
    return v == "yes" ? exit_yes : v == "no" ? exit_no : exit_unknown;
  }

private:
  const Common& c_;
  std::string command_;
  std::chrono::steady_clock::time_point t0_;
  nlohmann::json stats_ = nlohmann::json::object();
};

SearchOptions search_options(const Common& c, const std::string& branching, bool no_symmetry,
                             std::uint64_t node_limit) {
  SearchOptions opt;
  opt.workers = c.workers;
  opt.symmetry_breaking = !no_symmetry;
  opt.node_limit = node_limit;
  if (branching == "most-constrained") opt.branching = Branching::most_constrained;
  else if (branching != "lexicographic") throw UsageError("--branching must be lexicographic or most-constrained");
  return opt;
}

Rational parse_epsilon(const std::string& s) {
  Rational eps = parse_rational(s);
  if (eps < 0) throw UsageError("--epsilon must be nonnegative");
  return eps;
}

std::string describe(const ArrowVerdict& v) {
  std::ostringstream os;
  os << "arrow relation: " << to_string(v.kind);
  if (v.bad_coloring) os << " (bad colouring of " << v.bad_coloring->size() << " copies: " << text::join(*v.bad_coloring) << ")";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural Ramsey verification engine"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  if (const char* env = std::getenv("SRAMSEY_CATALOG")) common.catalog = env;
  app.add_option("--workers", common.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", common.seed, "seed for membership spot-checks");
  app.add_option("--out", common.out, "certificate path (default <command>.cert)");
  app.add_option("--stats", common.stats, "stats path (default <certificate>.stats.json)");
  app.add_option("--catalog", common.catalog, "user class catalog (default $SRAMSEY_CATALOG)");

  std::string cls, reduct_cls, a_spec, b_spec, c_spec, window_spec, tuple_spec, eps_spec = "0", branching = "lexicographic";
  std::string side = "right", mode = "automorphisms", form = "vanthe";
  int colors = 2, k = 1, bound = 5, steps = 3, horizon = 1, n_level = 2, b_size = 3, c_size = 5, limit_steps = 0;
  std::uint64_t guard = default_ecrp_guard, node_limit = 0;
  bool no_symmetry = false;
  std::vector<std::string> tuples;
  std::string cert_path;

  auto* check_class = app.add_subcommand("check-class", "check HP, JEP and AP up to a size bound");
  check_class->add_option("--class", cls)->required();
  check_class->add_option("--bound", bound)->check(CLI::PositiveNumber);

  auto* build_limit = app.add_subcommand("build-limit", "build a limit approximant chain");
  build_limit->add_option("--class", cls)->required();
  build_limit->add_option("--steps", steps)->check(CLI::NonNegativeNumber);
  build_limit->add_option("--horizon", horizon)->check(CLI::NonNegativeNumber);

  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--branching", branching, "lexicographic or most-constrained");
    sub->add_flag("--no-symmetry", no_symmetry, "disable lex-leader symmetry breaking");
    sub->add_option("--node-limit", node_limit, "stop after this many nodes (Unknown)");
  };

  auto* check_erp = app.add_subcommand("check-erp", "search a class for a Ramsey witness C");
  check_erp->add_option("--class", cls)->required();
  check_erp->add_option("--a", a_spec)->required();
  check_erp->add_option("--b", b_spec)->required();
  check_erp->add_option("--colors", colors)->check(CLI::PositiveNumber);
  check_erp->add_option("--k", k)->check(CLI::PositiveNumber);
  check_erp->add_option("--bound", bound)->check(CLI::PositiveNumber);
  add_search(check_erp);

  auto* arrows_cmd = app.add_subcommand("arrows", "decide C -> (B)^A_r (degree k with --k)");
  arrows_cmd->add_option("--class", cls)->required();
  arrows_cmd->add_option("--a", a_spec)->required();
  arrows_cmd->add_option("--b", b_spec)->required();
  arrows_cmd->add_option("--c", c_spec)->required();
  arrows_cmd->add_option("--colors", colors)->check(CLI::PositiveNumber);
  arrows_cmd->add_option("--k", k)->check(CLI::PositiveNumber);
  add_search(arrows_cmd);

  auto* degree_cmd = app.add_subcommand("degree", "Ramsey degree of a tuple within bounds");
  degree_cmd->add_option("--class", cls)->required();
  degree_cmd->add_option("--a", a_spec)->required();
  degree_cmd->add_option("--tuple", tuple_spec, "entries of A, comma separated (default 0..|A|-1)");
  degree_cmd->add_option("--b-size", b_size)->check(CLI::PositiveNumber);
  degree_cmd->add_option("--colors", colors)->check(CLI::PositiveNumber);
  degree_cmd->add_option("--c-size", c_size)->check(CLI::PositiveNumber);
  add_search(degree_cmd);

  auto* joint_cmd = app.add_subcommand("joint-degree", "one C serving several tuples at once");
  joint_cmd->add_option("--class", cls)->required();
  joint_cmd->add_option("--b", b_spec)->required();
  joint_cmd->add_option("--tuple", tuples, "k:entries, e.g. 1:0 or 2:0,1 (repeatable)");
  joint_cmd->add_option("--colors", colors)->check(CLI::PositiveNumber);
  joint_cmd->add_option("--bound", bound)->check(CLI::PositiveNumber);
  add_search(joint_cmd);

  auto* ecrp_cmd = app.add_subcommand("check-ecrp", "convex Ramsey instance by exact LP sweep");
  ecrp_cmd->add_option("--class", cls)->required();
  ecrp_cmd->add_option("--a", a_spec)->required();
  ecrp_cmd->add_option("--b", b_spec)->required();
  ecrp_cmd->add_option("--c", c_spec)->required();
  ecrp_cmd->add_option("--tuple", tuple_spec, "entries of A (default 0..|A|-1)");
  ecrp_cmd->add_option("--colors", colors)->check(CLI::PositiveNumber);
  ecrp_cmd->add_option("--epsilon", eps_spec, "exact rational p/q");
  ecrp_cmd->add_option("--guard", guard, "largest number of colourings swept");

  auto* count_cmd = app.add_subcommand("count-expansions", "expansions of A0 up to isomorphism over A0");
  count_cmd->add_option("--reduct-class", reduct_cls)->required();
  count_cmd->add_option("--class", cls)->required();
  count_cmd->add_option("--a0", a_spec)->required();

  auto* expansion_cmd = app.add_subcommand("check-expansion", "expansion property (class level or in a window)");
  expansion_cmd->add_option("--reduct-class", reduct_cls)->required();
  expansion_cmd->add_option("--class", cls)->required();
  expansion_cmd->add_option("--form", form, "vanthe or window");
  expansion_cmd->add_option("--a0", a_spec, "A0 for the class-level form");
  expansion_cmd->add_option("--bound", bound)->check(CLI::PositiveNumber);
  expansion_cmd->add_option("--window", window_spec, "expanded window for the window form");
  expansion_cmd->add_option("--side", side, "right, left or two-sided");
  expansion_cmd->add_option("--mode", mode, "automorphisms or partial-isomorphisms");
  expansion_cmd->add_option("--k", k)->check(CLI::NonNegativeNumber);

  auto* flow_cmd = app.add_subcommand("min-flow-window", "orbit closure of the window expansion at level n");
  flow_cmd->add_option("--reduct-class", reduct_cls)->required();
  flow_cmd->add_option("--class", cls)->required();
  flow_cmd->add_option("--window", window_spec)->required();
  flow_cmd->add_option("--n", n_level)->check(CLI::NonNegativeNumber);

  auto* orbit_cmd = app.add_subcommand("orbit-system", "finite inverse system of tuple copies");
  orbit_cmd->add_option("--class", cls)->required();
  orbit_cmd->add_option("--window", window_spec, "single-stage window");
  orbit_cmd->add_option("--limit-steps", limit_steps, "use a limit approximant chain instead");
  orbit_cmd->add_option("--horizon", horizon)->check(CLI::NonNegativeNumber);
  orbit_cmd->add_option("--tuple", tuples, "tuple over stage 0 (repeatable)");

  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate");
  verify_cmd->add_option("certificate", cert_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    Classes classes(common.catalog);
    auto opt = search_options(common, branching, no_symmetry, node_limit);

    if (*check_class) {
      auto K = classes.get(cls);
      K.size_bound = bound;
      spot_check_membership(K, common.seed);
      Run run(common, "check-class");
      auto hp = check_hp(K);
      auto jep = check_jep(K, common.workers);
      auto ap = check_ap(K, common.workers);
      run.stat("spans", ap.spans_checked);
      std::ostringstream s;
      s << "HP " << (hp.holds ? "holds" : "fails") << ", JEP " << (jep.holds ? "holds" : "fails") << ", AP "
        << (ap.holds ? "holds" : "fails") << " up to size " << bound;
      return run.finish(class_certificate(K.name, bound, hp, jep, ap), s.str());
    }

    if (*build_limit) {
      auto K = classes.get(cls);
      Run run(common, "build-limit");
      try {
        auto ch = build_limit_approximant(K, steps, horizon);
        std::ostringstream s;
        s << "stage sizes:";
        for (const auto& st : ch.stages) s << ' ' << st.size();
        return run.finish(limit_certificate(K.name, steps, horizon, &ch), s.str());
      } catch (const AmalgamationFailure& e) {
        return run.finish(limit_certificate(K.name, steps, horizon, nullptr, e.what()), e.what());
      }
    }

    if (*check_erp) {
      auto K = classes.get(cls);
      auto A = resolve_structure(a_spec, K, "A"), B = resolve_structure(b_spec, K, "B");
      Run run(common, "check-erp");
      auto w = find_ramsey_witness(K, A, B, colors, bound, k, opt);
      run.stat("candidates", w.candidates_tried);
      std::string s = w.C ? "witness C of size " + std::to_string(w.C->size())
                          : "no witness up to size " + std::to_string(bound) + " (not a refutation)";
      return run.finish(witness_certificate(K.name, A, B, colors, k, w), s);
    }

    if (*arrows_cmd) {
      auto K = classes.get(cls);
      auto A = resolve_structure(a_spec, K, "A"), B = resolve_structure(b_spec, K, "B"),
           C = resolve_structure(c_spec, K, "C");
      Run run(common, "arrows");
      auto v = degree_arrows(C, B, A, colors, k, opt);
      run.stat("nodes", v.stats.nodes);
      run.stat("search_seconds", v.stats.seconds);
      return run.finish(arrow_certificate(A, B, C, colors, k, v), describe(v));
    }

    if (*degree_cmd) {
      auto K = classes.get(cls);
      auto A = resolve_structure(a_spec, K, "A");
      Tuple a = tuple_spec.empty() ? identity_tuple(A.size()) : parse_tuple(tuple_spec, "--tuple");
      Run run(common, "degree");
      auto d = compute_degree(K, A, a, {b_size, colors, c_size}, opt);
      return run.finish(degree_certificate(K.name, d), d.summary());
    }

    if (*joint_cmd) {
      auto K = classes.get(cls);
      auto B = resolve_structure(b_spec, K, "B");
      std::vector<TupleDegree> tds;
      for (const auto& t : tuples) {
        auto colon = t.find(':');
        auto kk = colon == std::string::npos ? std::nullopt : text::to_int(t.substr(0, colon));
        if (!kk || *kk < 1) throw UsageError("--tuple expects k:entries, got '" + t + "'");
        tds.push_back({parse_tuple(t.substr(colon + 1), "--tuple"), static_cast<int>(*kk)});
      }
      Run run(common, "joint-degree");
      auto j = joint_degree_witness(K, B, tds, colors, bound, opt);
      std::string s = j.C ? "joint witness C of size " + std::to_string(j.C->size())
                          : "no joint witness up to size " + std::to_string(bound);
      return run.finish(joint_certificate(K.name, B, tds, colors, bound, j), s);
    }

    if (*ecrp_cmd) {
      auto K = classes.get(cls);
      auto A = resolve_structure(a_spec, K, "A"), B = resolve_structure(b_spec, K, "B"),
           C = resolve_structure(c_spec, K, "C");
      Tuple a = tuple_spec.empty() ? identity_tuple(A.size()) : parse_tuple(tuple_spec, "--tuple");
      Rational eps = parse_epsilon(eps_spec);
      Run run(common, "check-ecrp");
      auto v = check_ecrp_instance(A, a, B, C, colors, eps, guard, common.workers);
      run.stat("colorings", v.colorings);
      std::string s = v.kind == Answer::unknown
                          ? "sweep exceeds the guard of " + std::to_string(guard) + " colourings"
                          : "balanced combinations " + std::string(v.kind == Answer::yes ? "exist for all " : "fail for some of ") +
                                std::to_string(v.colorings) + " colourings at epsilon " + format_rational(eps);
      return run.finish(ecrp_certificate(A, a, B, C, colors, eps, v, common.workers), s);
    }

    if (*count_cmd) {
      auto P = ExpansionPair::make(classes.get(reduct_cls), classes.get(cls));
      auto A0 = resolve_structure(a_spec, P.K0, "A0");
      Run run(common, "count-expansions");
      auto e = count_expansions(A0, P);
      return run.finish(expansions_certificate(P, A0, e), std::to_string(e.count) + " expansion(s) up to isomorphism over A0");
    }

    if (*expansion_cmd) {
      auto P = ExpansionPair::make(classes.get(reduct_cls), classes.get(cls));
      if (form == "vanthe") {
        if (a_spec.empty()) throw UsageError("--a0 is required for the class-level form");
        auto A0 = resolve_structure(a_spec, P.K0, "A0");
        Run run(common, "check-expansion");
        auto v = check_expansion_vanthe(P, A0, bound);
        std::string s = v.B0 ? "B0 of size " + std::to_string(v.B0->size()) : "no B0 up to size " + std::to_string(bound);
        return run.finish(vanthe_certificate(P, A0, v), s);
      }
      if (form != "window") throw UsageError("--form must be vanthe or window");
      if (window_spec.empty()) throw UsageError("--window is required for the window form");
      auto W = resolve_structure(window_spec, P.K, "window");
      ExpansionSide sd = side == "right" ? ExpansionSide::right
                         : side == "left" ? ExpansionSide::left
                         : side == "two-sided" ? ExpansionSide::two_sided
                                               : throw UsageError("--side must be right, left or two-sided");
      WindowMode md = mode == "automorphisms" ? WindowMode::automorphisms
                      : mode == "partial-isomorphisms" ? WindowMode::partial_isomorphisms
                                                       : throw UsageError("--mode must be automorphisms or partial-isomorphisms");
      Run run(common, "check-expansion");
      auto v = check_window_expansion(W, P.sig0, sd, k, md, common.workers);
      std::string s = std::string(to_string(sd)) + " expansion property in the window (" + to_string(md) + "): " +
                      (v.refusal.empty() ? to_string(v.kind) : "refused: " + v.refusal);
      return run.finish(window_expansion_certificate(W, P.sig0, v), s);
    }

    if (*flow_cmd) {
      auto P = ExpansionPair::make(classes.get(reduct_cls), classes.get(cls));
      auto W = resolve_structure(window_spec, P.K, "window");
      Run run(common, "min-flow-window");
      auto fw = minimal_flow_window(W, P.sig0, n_level, common.workers);
      write_flow_window(std::cout, fw);
      return run.finish(flow_window_certificate(W, P.sig0, fw),
                        std::to_string(fw.points.size()) + " point(s) at level " + std::to_string(n_level));
    }

    if (*orbit_cmd) {
      auto K = classes.get(cls);
      Chain ch;
      if (limit_steps > 0) ch = build_limit_approximant(K, limit_steps, horizon);
      else if (!window_spec.empty()) ch.stages.push_back(resolve_structure(window_spec, K, "window"));
      else throw UsageError("orbit-system needs --window or --limit-steps");
      std::vector<Tuple> family;
      for (const auto& t : tuples) family.push_back(parse_tuple(t, "--tuple"));
      Run run(common, "orbit-system");
      auto sys = build_orbit_system(ch, family);
      write_orbit_system(std::cout, sys);
      return run.finish(orbit_certificate(ch, sys), std::to_string(count_threads(sys)) + " thread(s)");
    }

    if (*verify_cmd) {
      std::ifstream in(cert_path);
      if (!in) throw UsageError("cannot open certificate '" + cert_path + "'");
      auto c = read_certificate(in);
      auto r = verify_certificate(c, classes.resolver());
      std::cout << (r.ok ? "verified: " : "rejected: ") << r.message << "\n";
      return Run::verdict(r.ok ? "yes" : "no");
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_format;
  } catch (const RationalFormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_format;
  } catch (const InvalidStructure& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_format;
  } catch (const Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
