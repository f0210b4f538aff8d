// bellfrac: local and non-signaling fractions of two-party, two-setting,
// two-outcome behaviors, with cross-checking derivation routes.
//
// Exit codes: 0 success, 1 verification failure, 2 input error,
// 3 internal cross-check mismatch.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bellfrac/behavior.hpp"
#include "bellfrac/enumeration.hpp"
#include "bellfrac/io.hpp"
#include "bellfrac/lp.hpp"
#include "bellfrac/measures.hpp"
#include "bellfrac/polytopes.hpp"
#include "bellfrac/sampler.hpp"

#ifndef BELLFRAC_DATA_DIR
#define BELLFRAC_DATA_DIR "data"
#endif

namespace {

using namespace bellfrac;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitMismatch = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BELLFRAC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError("BELLFRAC_SEED", "not a 64-bit integer");
    }
  }
  return 0;
}

BehaviorDocument load_input(const std::string& path, double tolerance) {
  std::optional<Rational> tol;
  if (tolerance > 0) tol = parse_rational(std::to_string(tolerance));
  return load_behavior_file(path, tol);
}

Target parse_target(const std::string& t) {
  return t == "ns" ? Target::NS : Target::Local;
}

void print_fraction(const FractionResult& res, const std::string& route) {
  std::cout << "value: " << res.value.str() << " (" << to_double(res.value)
            << ")  [" << route << "]\n";
  if (!res.minimizers.empty()) {
    std::cout << "minimizers:";
    for (int id : res.minimizers) std::cout << ' ' << id;
    std::cout << "\nclasses:";
    for (auto c : res.minimizing_classes) std::cout << ' ' << class_token(c);
    std::cout << "\nunique: " << (res.unique ? "yes" : "no") << '\n';
  }
}

int cmd_fraction(const std::string& file, const std::string& target_str,
                 const std::string& method, double tolerance) {
  BehaviorDocument doc = load_input(file, tolerance);
  Target target = parse_target(target_str);

  std::optional<FractionResult> closed;
  std::optional<Rational> lp;
  if (method == "closed" || method == "both")
    closed = target == Target::Local ? local_fraction(doc.behavior)
                                     : ns_fraction(doc.behavior);
  if (method == "lp" || method == "both")
    lp = solve_primal(doc.behavior, target).p_star;

  if (closed && lp && closed->value != *lp) {
    std::cerr << "cross-check mismatch: closed form " << closed->value.str()
              << " vs LP " << lp->str() << '\n';
    return kExitMismatch;
  }
  if (closed) print_fraction(*closed, method == "both" ? "closed+lp" : "closed");
  else std::cout << "value: " << lp->str() << " (" << to_double(*lp) << ")  [lp]\n";
  return kExitOk;
}

int cmd_decompose(const std::string& file, const std::string& target_str,
                  double tolerance) {
  BehaviorDocument doc = load_input(file, tolerance);
  Target target = parse_target(target_str);
  auto sol = solve_primal(doc.behavior, target);
  auto dec = extract_decomposition(doc.behavior, sol, target);

  nlohmann::json out;
  out["p"] = dec.p.str();
  if (dec.inner)
    out["inner"] = nlohmann::json::parse(behavior_to_json(*dec.inner, "inner"));
  if (dec.outer)
    out["outer"] = nlohmann::json::parse(behavior_to_json(*dec.outer, "outer"));
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_vectors(const std::string& set, const std::string& out_dir) {
  auto emit = [&](const std::vector<MeasureVector>& vecs, const std::string& name) {
    if (out_dir.empty() || out_dir == "-") write_vectors(std::cout, vecs);
    else write_vectors_file(out_dir + "/" + name, vecs);
  };
  if (set == "q" || set == "both") emit(build_Q(), "vectors_q.txt");
  if (set == "s" || set == "both") emit(build_S(), "vectors_s.txt");
  return kExitOk;
}

void dump_vrep(const VRepresentation& vr) {
  for (const auto& v : vr.vertices) {
    for (const auto& x : v) std::cout << x.str() << ' ';
    std::cout << '\n';
  }
  for (const auto& r : vr.rays) {
    for (const auto& x : r) std::cout << x.str() << ' ';
    std::cout << "ray\n";
  }
}

int cmd_enumerate(const std::string& set, bool vrep) {
  int rc = kExitOk;
  auto run = [&](const char* name, auto derive, const std::vector<MeasureVector>& built) {
    try {
      auto derived = derive();
      bool same = same_vector_set(derived, built);
      std::cout << name << ": " << derived.size() << " vertices, "
                << (same ? "matches" : "DIFFERS FROM") << " the orbit construction\n";
      if (!same) rc = kExitMismatch;
    } catch (const DerivationMismatch& e) {
      std::cout << name << ": " << e.what() << '\n';
      rc = kExitMismatch;
    }
  };
  if (set == "q" || set == "both") {
    if (vrep) dump_vrep(enumerate_vertices(detail::dual_system(local_strategies())));
    run("Q", [] { return derive_Q(); }, build_Q());
  }
  if (set == "s" || set == "both") {
    if (vrep) dump_vrep(enumerate_vertices(detail::dual_system(ns_vertices())));
    run("S", [] { return derive_S(); }, build_S());
  }
  return rc;
}

int cmd_sample(const std::string& mode, const std::string& set, std::size_t n,
               std::uint64_t seed, double gap, const std::string& format) {
  SampleConfig cfg{n, seed, gap};
  if (mode == "migration") {
    auto rep = migration(cfg);
    if (format == "json") {
      nlohmann::json out;
      out["rng"] = rep.rng_name;
      out["n"] = rep.n;
      out["seed"] = rep.seed;
      out["unchanged"] = rep.unchanged;
      out["ties_discarded"] = rep.ties_discarded;
      out["transitions"] = nlohmann::json::array();
      for (const auto& [key, count] : rep.transitions)
        out["transitions"].push_back({{"from", class_token(key.first)},
                                      {"to", class_token(key.second)},
                                      {"count", count}});
      std::cout << out.dump(2) << '\n';
    } else {
      std::cout << "# rng=" << rep.rng_name << " n=" << rep.n << " seed=" << rep.seed
                << " unchanged=" << rep.unchanged
                << " ties=" << rep.ties_discarded << '\n'
                << migration_csv(rep);
    }
    return kExitOk;
  }
  auto rep = prevalence(cfg, set == "s" ? VectorSet::S : VectorSet::Q);
  if (format == "json") {
    nlohmann::json out;
    out["rng"] = rep.rng_name;
    out["set"] = rep.set_name;
    out["n"] = rep.n;
    out["seed"] = rep.seed;
    out["ties_discarded"] = rep.ties_discarded;
    out["classes"] = nlohmann::json::array();
    for (const auto& [cls, count] : rep.counts)
      out["classes"].push_back({{"class", class_token(cls)},
                                {"count", count},
                                {"percentage", rep.percentage(cls)}});
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << "# rng=" << rep.rng_name << " set=" << rep.set_name
              << " n=" << rep.n << " seed=" << rep.seed << '\n'
              << prevalence_csv(rep);
  }
  return kExitOk;
}

bool witness_suite(std::size_t& checked) {
  auto run_one_set = [&](const std::vector<MeasureVector>& set, auto fraction) {
    for (const auto& v : set) {
      Behavior w = witness(v);
      FractionResult res = fraction(w);
      ++checked;
      if (res.value != 0 || !res.unique || res.minimizers != std::vector<int>{v.id}) {
        std::cerr << "witness failure for vector id " << v.id << " ("
                  << class_token(v.cls) << ")\n";
        return false;
      }
    }
    return true;
  };
  return run_one_set(build_Q(), [](const Behavior& b) { return local_fraction(b); }) &&
         run_one_set(build_S(), [](const Behavior& b) { return ns_fraction(b); });
}

int cmd_witnesses() {
  std::size_t checked = 0;
  bool ok = witness_suite(checked);
  std::cout << checked << " witnesses checked: " << (ok ? "all pass" : "FAILURES") << '\n';
  return ok ? kExitOk : kExitVerifyFail;
}

int cmd_verify(bool quick, const std::string& data_dir, std::uint64_t seed) {
  int failures = 0;
  auto check = [&](const std::string& name, auto fn) {
    bool ok = false;
    std::string detail;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      detail = e.what();
    }
    std::cout << (ok ? "  ok    " : "  FAIL  ") << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << '\n';
    if (!ok) ++failures;
  };

  check("symmetry group has 32 elements",
        [] { return symmetry_group().size() == 32; });
  check("orbit construction: 128 and 120 vectors",
        [] { return build_Q().size() == 128 && build_S().size() == 120; });
  check("shipped data files match regeneration", [&] {
    check_against_file(build_Q(), data_dir + "/vectors_q.txt");
    check_against_file(build_S(), data_dir + "/vectors_s.txt");
    return true;
  });
  check("vertex enumeration re-derives both sets", [] {
    return same_vector_set(derive_Q(), build_Q()) &&
           same_vector_set(derive_S(), build_S());
  });
  check("identities on 200 random rational behaviors", [&] {
    CounterRng rng(seed, 1);
    for (int i = 0; i < 200; ++i) {
      Behavior B = random_rational_behavior(rng);
      if (max_signaling_via_f(B) != max_signaling(B)) return false;
    }
    return true;
  });
  check("LP agrees with closed form on 50 random behaviors", [&] {
    CounterRng rng(seed, 2);
    for (int i = 0; i < 50; ++i) {
      Behavior B = random_rational_behavior(rng);
      if (solve_local_primal(B).p_star != local_fraction(B).value) return false;
      if (solve_ns_primal(B).p_star != ns_fraction(B).value) return false;
    }
    return true;
  });
  check("248 non-redundancy witnesses", [] {
    std::size_t n = 0;
    return witness_suite(n) && n == 248;
  });
  if (!quick) {
    check("500k prevalence within 0.25pp of reference shares", [&] {
      SampleConfig cfg{500000, seed, 1e-12};
      auto q = prevalence(cfg, VectorSet::Q);
      auto s = prevalence(cfg, VectorSet::S);
      auto near = [](double got, double want) { return std::abs(got - want) <= 0.25; };
      return near(q.percentage(VectorClass::F), 76.18) &&
             near(q.percentage(VectorClass::G), 17.35) &&
             near(q.percentage(VectorClass::T), 2.62) &&
             near(q.percentage(VectorClass::S), 3.81) &&
             near(q.percentage(VectorClass::E), 0.04) &&
             near(s.percentage(VectorClass::F), 77.83) &&
             near(s.percentage(VectorClass::G), 18.27) &&
             near(s.percentage(VectorClass::T), 3.13) &&
             near(s.percentage(VectorClass::Z), 0.76);
    });
  }

  if (failures) {
    std::cout << failures << " check(s) failed\n";
    return kExitVerifyFail;
  }
  std::cout << "all checks passed\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local and non-signaling fractions of Bell behaviors"};
  app.require_subcommand(1);

  std::string file, target = "local", method = "both", set = "both";
  std::string mode = "prevalence", format = "csv", out_path, data_dir = BELLFRAC_DATA_DIR;
  double tolerance = 0, gap = 1e-12;
  std::size_t n = 100000;
  std::uint64_t seed = 0;
  bool seed_given = false, vrep = false, quick = false;

  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (wins over BELLFRAC_SEED)")
        ->each([&](const std::string&) { seed_given = true; });
  };

  auto* f = app.add_subcommand("fraction", "Compute the local or non-signaling fraction");
  f->add_option("file", file, "behavior document (.json or .csv)")->required();
  f->add_option("--target", target, "local|ns")->check(CLI::IsMember({"local", "ns"}));
  f->add_option("--method", method, "closed|lp|both")
      ->check(CLI::IsMember({"closed", "lp", "both"}));
  f->add_option("--tolerance", tolerance, "lenient block-sum tolerance");

  auto* d = app.add_subcommand("decompose", "Optimal convex decomposition");
  d->add_option("file", file, "behavior document")->required();
  d->add_option("--target", target, "local|ns")->check(CLI::IsMember({"local", "ns"}));
  d->add_option("--tolerance", tolerance, "lenient block-sum tolerance");

  auto* v = app.add_subcommand("vectors", "Export the solution-vector sets");
  v->add_option("--set", set, "q|s|both")->check(CLI::IsMember({"q", "s", "both"}));
  v->add_option("--out", out_path, "output directory ('-' or empty for stdout)");

  auto* e = app.add_subcommand("enumerate", "Re-derive the sets by vertex enumeration");
  e->add_option("--set", set, "q|s|both")->check(CLI::IsMember({"q", "s", "both"}));
  e->add_flag("--vrep", vrep, "dump the raw V-representation (rays tagged)");

  auto* sm = app.add_subcommand("sample", "Prevalence / migration experiments");
  sm->add_option("--mode", mode, "prevalence|migration")
      ->check(CLI::IsMember({"prevalence", "migration"}));
  sm->add_option("--set", set, "q|s (prevalence only)");
  sm->add_option("--n", n, "sample count");
  sm->add_option("--gap", gap, "uniqueness gap threshold");
  sm->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  add_seed(sm);

  auto* w = app.add_subcommand("witnesses", "Run the non-redundancy witness suite");
  (void)w;

  auto* vf = app.add_subcommand("verify", "Cross-module self-verification");
  vf->add_flag("--quick", quick, "skip the 500k sampling check");
  vf->add_option("--data", data_dir, "directory with the shipped vector files");
  add_seed(vf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    int rc = app.exit(ex);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (!seed_given) seed = default_seed();
    if (f->parsed()) return cmd_fraction(file, target, method, tolerance);
    if (d->parsed()) return cmd_decompose(file, target, tolerance);
    if (v->parsed()) return cmd_vectors(set, out_path);
    if (e->parsed()) return cmd_enumerate(set, vrep);
    if (sm->parsed()) return cmd_sample(mode, set == "both" ? "q" : set, n, seed, gap, format);
    if (w->parsed()) return cmd_witnesses();
    if (vf->parsed()) return cmd_verify(quick, data_dir, seed);
  } catch (const ParseError& ex) {
    std::cerr << "input error: " << ex.what() << '\n';
    return kExitInputError;
  } catch (const NegativeEntry& ex) {
    std::cerr << "input error: " << ex.what() << '\n';
    return kExitInputError;
  } catch (const BlockNotNormalized& ex) {
    std::cerr << "input error: " << ex.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitVerifyFail;
  }
  return kExitOk;
}
