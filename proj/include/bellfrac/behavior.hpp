#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "bellfrac/rational.hpp"

namespace bellfrac {

// Flat ordering of the 16 conditional probabilities: context-major over
// xy = 00,01,10,11, outcome-minor over ab = 00,01,10,11.
constexpr std::size_t flat_index(int a, int b, int x, int y) {
  return static_cast<std::size_t>(4 * (2 * x + y) + (2 * a + b));
}

class NegativeEntry : public std::runtime_error {
 public:
  explicit NegativeEntry(std::size_t index)
      : std::runtime_error("negative probability at flat index " + std::to_string(index)),
        index(index) {}
  std::size_t index;
};

class BlockNotNormalized : public std::runtime_error {
 public:
  BlockNotNormalized(int context, const Rational& sum)
      : std::runtime_error("context block " + std::to_string(context) +
                           " sums to " + sum.str() + ", expected 1"),
        context(context),
        sum(sum) {}
  int context;
  Rational sum;
};

/// A two-party, two-setting, two-outcome behavior: the sixteen conditional
/// probabilities P(a,b|x,y) as exact rationals. Instances are always valid
/// (non-negative, each context block summing to 1 exactly).
class Behavior {
 public:
  static Behavior validate(const std::array<Rational, 16>& raw) {
    for (std::size_t i = 0; i < 16; ++i)
      if (raw[i] < 0) throw NegativeEntry(i);
    for (int ctx = 0; ctx < 4; ++ctx) {
      Rational sum = 0;
      for (std::size_t j = 0; j < 4; ++j) sum += raw[4 * ctx + j];
      if (sum != 1) throw BlockNotNormalized(ctx, sum);
    }
    return Behavior(raw);
  }

  /// Lenient path for empirical frequencies: each block sum must be within
  /// tol of 1, then the block is renormalized exactly by its sum.
  static Behavior validate_approx(std::array<Rational, 16> raw,
                                  const Rational& tol = Rational(1, 1000000000)) {
    for (std::size_t i = 0; i < 16; ++i)
      if (raw[i] < 0) throw NegativeEntry(i);
    for (int ctx = 0; ctx < 4; ++ctx) {
      Rational sum = 0;
      for (std::size_t j = 0; j < 4; ++j) sum += raw[4 * ctx + j];
      Rational err = sum - 1;
      if (err < 0) err = -err;
      if (err > tol) throw BlockNotNormalized(ctx, sum);
      for (std::size_t j = 0; j < 4; ++j) raw[4 * ctx + j] /= sum;
    }
    return Behavior(raw);
  }

  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  const Rational& at(int a, int b, int x, int y) const {
    return entries_[flat_index(a, b, x, y)];
  }
  const std::array<Rational, 16>& entries() const { return entries_; }

  friend bool operator==(const Behavior&, const Behavior&) = default;

 private:
  explicit Behavior(std::array<Rational, 16> e) : entries_(std::move(e)) {}
  std::array<Rational, 16> entries_;
};

enum class BehaviorClass { Local, NonsignalingNonlocal, Signaling };

/// All scalar statistics of a behavior: marginals, correlators, the four
/// signaling signatures and their max, the four CHSH expressions and their max.
struct BehaviorStats {
  std::array<Rational, 4> marginals_a;  // P(a=0|xy), xy = 00,01,10,11
  std::array<Rational, 4> marginals_b;  // P(b=0|xy)
  std::array<Rational, 4> correlators;  // <ab>_xy
  std::array<Rational, 4> delta;        // signatures
  Rational delta_max;
  std::array<Rational, 4> chsh;
  Rational chsh_max;
};

inline BehaviorStats compute_stats(const Behavior& B) {
  BehaviorStats st;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      int ctx = 2 * x + y;
      st.marginals_a[ctx] = B.at(0, 0, x, y) + B.at(0, 1, x, y);
      st.marginals_b[ctx] = B.at(0, 0, x, y) + B.at(1, 0, x, y);
      st.correlators[ctx] = B.at(0, 0, x, y) - B.at(0, 1, x, y)
                          - B.at(1, 0, x, y) + B.at(1, 1, x, y);
    }

  st.delta[0] = st.marginals_a[0] - st.marginals_a[1];
  st.delta[1] = st.marginals_a[2] - st.marginals_a[3];
  st.delta[2] = st.marginals_b[0] - st.marginals_b[2];
  st.delta[3] = st.marginals_b[1] - st.marginals_b[3];

  const auto& c = st.correlators;
  st.chsh[0] =  c[0] + c[1] + c[2] - c[3];
  st.chsh[1] =  c[0] + c[1] - c[2] + c[3];
  st.chsh[2] =  c[0] - c[1] + c[2] + c[3];
  st.chsh[3] = -c[0] + c[1] + c[2] + c[3];

  st.delta_max = 0;
  for (const auto& d : st.delta) {
    Rational a = d < 0 ? Rational(-d) : d;
    if (a > st.delta_max) st.delta_max = a;
  }
  st.chsh_max = 0;
  for (const auto& s : st.chsh) {
    Rational a = s < 0 ? Rational(-s) : s;
    if (a > st.chsh_max) st.chsh_max = a;
  }
  return st;
}

inline std::array<Rational, 4> signaling_signatures(const Behavior& B) {
  return compute_stats(B).delta;
}

inline Rational max_signaling(const Behavior& B) {
  return compute_stats(B).delta_max;
}

inline BehaviorClass classify(const Behavior& B) {
  BehaviorStats st = compute_stats(B);
  if (st.delta_max != 0) return BehaviorClass::Signaling;
  return st.chsh_max <= 2 ? BehaviorClass::Local : BehaviorClass::NonsignalingNonlocal;
}

}  // namespace bellfrac
