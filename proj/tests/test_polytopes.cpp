#include <doctest.h>

#include <set>

#include "bellfrac/measures.hpp"
#include "bellfrac/polytopes.hpp"

using namespace bellfrac;

TEST_CASE("literal local patterns equal generation from strategy labels") {
  auto locals = local_strategies();
  auto labels = strategy_labels();
  REQUIRE(locals.size() == 16);
  for (std::size_t k = 0; k < 16; ++k)
    CHECK(locals[k] == deterministic_behavior(labels[k]));
}

TEST_CASE("local strategies are pairwise distinct 0/1 behaviors") {
  auto locals = local_strategies();
  std::set<std::array<Rational, 16>> seen;
  for (const auto& L : locals) {
    for (std::size_t i = 0; i < 16; ++i)
      CHECK((L[i] == 0 || L[i] == 1));
    CHECK(seen.insert(L.entries()).second);
  }
}

TEST_CASE("PR boxes: half-integer entries, all distinct, first is a xor b = xy") {
  auto boxes = pr_boxes();
  REQUIRE(boxes.size() == 8);
  std::set<std::array<Rational, 16>> seen;
  for (const auto& R : boxes) {
    for (std::size_t i = 0; i < 16; ++i)
      CHECK((R[i] == 0 || R[i] == Rational(1, 2)));
    CHECK(seen.insert(R.entries()).second);
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          bool win = (a ^ b) == (x & y);
          CHECK(boxes[0].at(a, b, x, y) == (win ? Rational(1, 2) : Rational(0)));
        }
}

TEST_CASE("vertex sets are closed under the symmetry group") {
  auto group = symmetry_group();
  auto check_closed = [&](const std::vector<Behavior>& vs) {
    std::set<std::array<Rational, 16>> members;
    for (const auto& v : vs) members.insert(v.entries());
    for (const auto& op : group)
      for (const auto& v : vs)
        CHECK(members.count(apply_symmetry(op, v).entries()) == 1);
  };
  check_closed(local_strategies());
  check_closed(pr_boxes());
}

TEST_CASE("mix validates convexity") {
  auto locals = local_strategies();
  std::vector<Rational> w(16, Rational(1, 16));
  CHECK_NOTHROW(mix(w, locals));

  w[0] = Rational(1, 8);
  CHECK_THROWS_AS(mix(w, locals), WeightsNotConvex);

  w[0] = Rational(-1, 16);
  w[1] = Rational(3, 16);
  CHECK_THROWS_AS(mix(w, locals), WeightsNotConvex);
}

TEST_CASE("uniform behavior is the average of all PR boxes and of all locals") {
  std::vector<Rational> w8(8, Rational(1, 8));
  CHECK(mix(w8, pr_boxes()) == uniform_behavior());
  std::vector<Rational> w16(16, Rational(1, 16));
  CHECK(mix(w16, local_strategies()) == uniform_behavior());
}
