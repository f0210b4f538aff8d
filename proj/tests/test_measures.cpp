#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <vector>

#include "bellfrac/measures.hpp"
#include "bellfrac/polytopes.hpp"
#include "bellfrac/sampler.hpp"
#include "test_support.hpp"

using namespace bellfrac;

namespace {

std::map<VectorClass, int> class_counts(const std::vector<MeasureVector>& set) {
  std::map<VectorClass, int> counts;
  for (const auto& v : set) ++counts[v.cls];
  return counts;
}

// Block-constant integer vectors u with constants summing to c satisfy
// u . P = c for every behavior; used to recognize the pair-sum identities.
bool blocks_constant_summing(const std::array<int, 16>& u, int total) {
  int sum = 0;
  for (int ctx = 0; ctx < 4; ++ctx) {
    for (int j = 1; j < 4; ++j)
      if (u[4 * ctx + j] != u[4 * ctx]) return false;
    sum += u[4 * ctx];
  }
  return sum == total;
}

}  // namespace

TEST_CASE("symmetry group has exactly 32 elements, all permutations") {
  auto group = symmetry_group();
  CHECK(group.size() == 32);
  std::set<std::array<int, 16>> distinct;
  for (const auto& op : group) {
    std::array<bool, 16> hit{};
    for (int i : op.perm) hit[i] = true;
    CHECK(std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
    distinct.insert(op.perm);
  }
  CHECK(distinct.size() == 32);
}

TEST_CASE("orbit sizes match the four orbit types") {
  for (const auto& rep : orbit_representatives()) {
    std::size_t expect = 0;
    switch (rep.orbit) {
      case OrbitTag::Alpha: expect = 8; break;
      case OrbitTag::Beta: expect = 16; break;
      case OrbitTag::Gamma: expect = 16; break;
      case OrbitTag::Delta: expect = 32; break;
    }
    CHECK(orbit(rep).size() == expect);
  }
}

TEST_CASE("solution sets have the published sizes and class cardinalities") {
  auto Q = build_Q();
  auto S = build_S();
  CHECK(Q.size() == 128);
  CHECK(S.size() == 120);

  auto qc = class_counts(Q);
  CHECK(qc[VectorClass::F] == 8);
  CHECK(qc[VectorClass::G] == 16);
  CHECK(qc[VectorClass::T] == 32);
  CHECK(qc[VectorClass::S] == 64);
  CHECK(qc[VectorClass::E] == 8);

  auto sc = class_counts(S);
  CHECK(sc[VectorClass::F] == 8);
  CHECK(sc[VectorClass::G] == 16);
  CHECK(sc[VectorClass::T] == 32);
  CHECK(sc[VectorClass::Z] == 64);

  // ids are 1..N in order
  for (std::size_t i = 0; i < Q.size(); ++i) CHECK(Q[i].id == static_cast<int>(i) + 1);
  for (std::size_t i = 0; i < S.size(); ++i) CHECK(S[i].id == static_cast<int>(i) + 1);
}

TEST_CASE("f/g/t classes are shared between the two sets") {
  auto Q = build_Q();
  auto S = build_S();
  auto shared = [](const std::vector<MeasureVector>& set) {
    std::set<std::array<int, 16>> out;
    for (const auto& v : set)
      if (v.cls == VectorClass::F || v.cls == VectorClass::G || v.cls == VectorClass::T)
        out.insert(v.coeffs);
    return out;
  };
  CHECK(shared(Q) == shared(S));
}

TEST_CASE("f-values realize 1 +- the signaling signatures") {
  CounterRng rng(7);
  auto Q = build_Q();
  for (int trial = 0; trial < 50; ++trial) {
    Behavior B = random_rational_behavior(rng);
    auto delta = signaling_signatures(B);

    std::vector<Rational> fvals, expect;
    for (const auto& v : Q)
      if (v.cls == VectorClass::F) fvals.push_back(evaluate(v, B));
    for (const auto& d : delta) {
      expect.push_back(1 + d);
      expect.push_back(1 - d);
    }
    std::sort(fvals.begin(), fvals.end());
    std::sort(expect.begin(), expect.end());
    CHECK(fvals == expect);

    // The f-minimum is exactly 1 - max signaling.
    CHECK(max_signaling_via_f(B) == max_signaling(B));
  }
}

TEST_CASE("e-values realize 2 -+ the CHSH expressions over 2") {
  CounterRng rng(8);
  auto Q = build_Q();
  for (int trial = 0; trial < 50; ++trial) {
    Behavior B = random_rational_behavior(rng);
    auto st = compute_stats(B);

    std::vector<Rational> evals, expect;
    for (const auto& v : Q)
      if (v.cls == VectorClass::E) evals.push_back(evaluate(v, B));
    for (const auto& s : st.chsh) {
      expect.push_back(2 + s / 2);
      expect.push_back(2 - s / 2);
    }
    std::sort(evals.begin(), evals.end());
    std::sort(expect.begin(), expect.end());
    CHECK(evals == expect);
  }
}

TEST_CASE("f-vectors pair to constant 2, e-vectors to constant 4") {
  auto Q = build_Q();
  auto pairs_to = [&](VectorClass cls, int total) {
    std::vector<const MeasureVector*> members;
    for (const auto& v : Q)
      if (v.cls == cls) members.push_back(&v);
    for (const auto* v : members) {
      int partners = 0;
      for (const auto* u : members) {
        if (u == v) continue;
        std::array<int, 16> sum;
        for (int i = 0; i < 16; ++i) sum[i] = v->coeffs[i] + u->coeffs[i];
        if (blocks_constant_summing(sum, total)) ++partners;
      }
      CHECK(partners == 1);
    }
  };
  pairs_to(VectorClass::F, 2);
  pairs_to(VectorClass::E, 4);
}

TEST_CASE("every z-vector is an s-vector plus one unit coefficient") {
  auto Q = build_Q();
  auto S = build_S();
  std::set<std::array<int, 16>> s_class;
  for (const auto& v : Q)
    if (v.cls == VectorClass::S) s_class.insert(v.coeffs);

  for (const auto& z : S) {
    if (z.cls != VectorClass::Z) continue;
    int matches = 0;
    for (int pos = 0; pos < 16; ++pos) {
      if (z.coeffs[pos] == 0) continue;
      auto reduced = z.coeffs;
      --reduced[pos];
      if (s_class.count(reduced)) ++matches;
    }
    CHECK(matches >= 1);
  }
}

TEST_CASE("fractions are invariant under the symmetry group") {
  CounterRng rng(9);
  auto group = symmetry_group();
  for (int trial = 0; trial < 5; ++trial) {
    Behavior B = random_rational_behavior(rng);
    Rational mu_l = local_fraction(B).value;
    Rational mu_ns = ns_fraction(B).value;
    for (const auto& op : group) {
      Behavior C = apply_symmetry(op, B);
      CHECK(local_fraction(C).value == mu_l);
      CHECK(ns_fraction(C).value == mu_ns);
    }
  }
}

TEST_CASE("fractions are concave under mixing") {
  CounterRng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    Behavior A = random_rational_behavior(rng);
    Behavior B = random_rational_behavior(rng);
    Rational lambda(1 + (rng.next() % 9), 10);
    std::array<Rational, 16> e;
    for (std::size_t i = 0; i < 16; ++i)
      e[i] = lambda * A[i] + (1 - lambda) * B[i];
    Behavior M = Behavior::validate(e);
    CHECK(local_fraction(M).value >=
          lambda * local_fraction(A).value + (1 - lambda) * local_fraction(B).value);
    CHECK(ns_fraction(M).value >=
          lambda * ns_fraction(A).value + (1 - lambda) * ns_fraction(B).value);
  }
}

TEST_CASE("landmark fraction values") {
  Behavior pr = pr_boxes()[0];
  CHECK(local_fraction(pr).value == 0);
  CHECK(ns_fraction(pr).value == 1);

  for (const auto& L : local_strategies()) {
    CHECK(local_fraction(L).value == 1);
    CHECK(ns_fraction(L).value == 1);
  }

  CHECK(local_fraction(testing::pr_mixture()).value == Rational(1, 2));

  Behavior copy = testing::copy_behavior();
  CHECK(local_fraction(copy).value == 0);
  CHECK(ns_fraction(copy).value == 0);
}

TEST_CASE("closed NS formula agrees with the vector minimum") {
  CHECK_THROWS_AS(local_fraction_ns_formula(testing::copy_behavior()), NotNonsignaling);
  CHECK(local_fraction_ns_formula(pr_boxes()[0]) == 0);
  CHECK(local_fraction_ns_formula(testing::pr_mixture()) == Rational(1, 2));
  CHECK(local_fraction_ns_formula(uniform_behavior()) == 1);

  // random NS behaviors: convex mixtures of the 24 vertices
  CounterRng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto vs = ns_vertices();
    std::vector<Rational> w(vs.size());
    Rational total = 0;
    for (auto& wk : w) {
      wk = Rational((rng.next() & 0xff) + 1);
      total += wk;
    }
    for (auto& wk : w) wk /= total;
    Behavior B = mix(w, vs);
    CHECK(local_fraction(B).value == local_fraction_ns_formula(B));
  }
}

TEST_CASE("minimizer reporting: ties, uniqueness, clamp") {
  // The PR box minimizes many vectors at 0 simultaneously.
  auto res = local_fraction(pr_boxes()[0]);
  CHECK(res.value == 0);
  CHECK(!res.minimizers.empty());
  CHECK(std::is_sorted(res.minimizers.begin(), res.minimizers.end()));
  CHECK(res.unique == (res.minimizers.size() == 1));

  // For locals the f-vectors all score exactly 1, so the minimum sits at the
  // cap with minimizers still reported.
  auto det = local_fraction(local_strategies()[0]);
  CHECK(det.value == 1);
  CHECK(!det.minimizers.empty());
}

TEST_CASE("float evaluation path: Tsirelson point") {
  auto p = bellfrac::testing::tsirelson_f64();
  auto Q = build_Q();
  double best = 1.0;
  for (const auto& v : Q) best = std::min(best, evaluate_f64(v, p));
  CHECK(best == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("vector file round-trip and shipped-data check") {
  auto Q = build_Q();
  auto S = build_S();
  const std::string data_dir = BELLFRAC_DATA_DIR;
  CHECK_NOTHROW(check_against_file(Q, data_dir + "/vectors_q.txt"));
  CHECK_NOTHROW(check_against_file(S, data_dir + "/vectors_s.txt"));

  // round-trip through a temp file
  const std::string tmp = "roundtrip_vectors.txt";
  write_vectors_file(tmp, Q);
  auto back = read_vectors_file(tmp);
  REQUIRE(back.size() == Q.size());
  for (std::size_t i = 0; i < Q.size(); ++i) {
    CHECK(back[i].coeffs == Q[i].coeffs);
    CHECK(back[i].cls == Q[i].cls);
    CHECK(back[i].orbit == Q[i].orbit);
  }

  // fault injection: flip one coefficient, expect a mismatch
  auto corrupted = Q;
  corrupted[40].coeffs[3] += 1;
  write_vectors_file(tmp, corrupted);
  CHECK_THROWS_AS(check_against_file(Q, tmp), DataMismatch);
  std::remove(tmp.c_str());
}
