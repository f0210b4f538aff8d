#pragma once

#include <array>
#include <cmath>
#include <string>

#include "bellfrac/behavior.hpp"
#include "bellfrac/polytopes.hpp"

namespace bellfrac::testing {

inline Behavior from_strings(const std::array<std::string, 16>& vals) {
  std::array<Rational, 16> e;
  for (std::size_t i = 0; i < 16; ++i) e[i] = parse_rational(vals[i]);
  return Behavior::validate(e);
}

/// Perfect-correlation "copy" behavior: identical outputs that depend on
/// Alice's setting (a = b = x). Heavily signaling on Bob's side.
inline Behavior copy_behavior() {
  std::array<Rational, 16> e{};
  e[flat_index(0, 0, 0, 0)] = 1;
  e[flat_index(0, 0, 0, 1)] = 1;
  e[flat_index(1, 1, 1, 0)] = 1;
  e[flat_index(1, 1, 1, 1)] = 1;
  return Behavior::validate(e);
}

/// (3/4) PR + (1/4) uniform: CHSH value 3, local fraction 1/2.
inline Behavior pr_mixture() {
  const Behavior pr = pr_boxes()[0];
  const Behavior u = uniform_behavior();
  std::array<Rational, 16> e;
  for (std::size_t i = 0; i < 16; ++i)
    e[i] = Rational(3, 4) * pr[i] + Rational(1, 4) * u[i];
  return Behavior::validate(e);
}

/// Tsirelson-point probabilities in binary64: 1/4 (1 + (-1)^(a+b+xy)/sqrt 2).
inline std::array<double, 16> tsirelson_f64() {
  std::array<double, 16> p;
  const double r = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          int sign = (a + b + x * y) % 2 ? -1 : 1;
          p[flat_index(a, b, x, y)] = 0.25 * (1.0 + sign * r);
        }
  return p;
}

}  // namespace bellfrac::testing
