#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "bellfrac/behavior.hpp"

namespace bellfrac {

/// A deterministic strategy pair: Alice answers f(x), Bob answers g(y).
/// Both functions over {0,1} are encoded by their value table (f0, f1).
struct StrategyLabel {
  std::array<int, 2> f;
  std::array<int, 2> g;
};

class WeightsNotConvex : public std::runtime_error {
 public:
  explicit WeightsNotConvex(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Vertex data in the published column order. Locals use the function order
// {const 0, const 1, identity, negation} for Alice (outer) and Bob (inner);
// the PR boxes follow the shipped matrix columns. '1' entries mean
// probability 1 for locals and 1/2 for PR boxes.
inline constexpr std::array<std::string_view, 16> kLocalPatterns = {
    "1000100010001000", "0100010001000100", "1000010010000100", "0100100001001000",
    "0010001000100010", "0001000100010001", "0010000100100001", "0001001000010010",
    "1000100000100010", "0100010000010001", "1000010000100001", "0100100000010010",
    "0010001010001000", "0001000101000100", "0010000110000100", "0001001001001000",
};

inline constexpr std::array<std::string_view, 8> kPrBoxPatterns = {
    "1001100110010110", "1001100101101001", "1001011010011001", "0110100110011001",
    "0110011001101001", "0110011010010110", "0110100101100110", "1001011001100110",
};

inline Behavior pattern_behavior(std::string_view pattern, const Rational& weight) {
  std::array<Rational, 16> e;
  for (std::size_t i = 0; i < 16; ++i) e[i] = pattern[i] == '1' ? weight : Rational(0);
  return Behavior::validate(e);
}

}  // namespace detail

/// The 16 labels in the column order of the local-strategy matrix.
inline std::array<StrategyLabel, 16> strategy_labels() {
  // Function order: const 0, const 1, identity, negation.
  constexpr std::array<std::array<int, 2>, 4> funcs = {{{0, 0}, {1, 1}, {0, 1}, {1, 0}}};
  std::array<StrategyLabel, 16> labels;
  for (std::size_t fi = 0; fi < 4; ++fi)
    for (std::size_t gi = 0; gi < 4; ++gi)
      labels[4 * fi + gi] = {funcs[fi], funcs[gi]};
  return labels;
}

/// Builds the deterministic behavior for one strategy label.
inline Behavior deterministic_behavior(const StrategyLabel& s) {
  std::array<Rational, 16> e{};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      e[flat_index(s.f[x], s.g[y], x, y)] = 1;
  return Behavior::validate(e);
}

/// The 16 local deterministic strategies, bit-exact in shipped column order.
inline std::vector<Behavior> local_strategies() {
  std::vector<Behavior> out;
  out.reserve(16);
  for (auto pattern : detail::kLocalPatterns)
    out.push_back(detail::pattern_behavior(pattern, Rational(1)));
  return out;
}

/// The 8 PR boxes in shipped column order; the first satisfies a xor b = x*y.
inline std::vector<Behavior> pr_boxes() {
  std::vector<Behavior> out;
  out.reserve(8);
  for (auto pattern : detail::kPrBoxPatterns)
    out.push_back(detail::pattern_behavior(pattern, Rational(1, 2)));
  return out;
}

/// All 24 non-signaling vertices: the 16 locals followed by the 8 PR boxes.
inline std::vector<Behavior> ns_vertices() {
  std::vector<Behavior> out = local_strategies();
  for (auto& r : pr_boxes()) out.push_back(r);
  return out;
}

inline Behavior mix(const std::vector<Rational>& weights,
                    const std::vector<Behavior>& vertices) {
  if (weights.size() != vertices.size())
    throw WeightsNotConvex("weight/vertex count mismatch");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw WeightsNotConvex("negative weight");
    total += w;
  }
  if (total != 1) throw WeightsNotConvex("weights sum to " + total.str());
  std::array<Rational, 16> e{};
  for (std::size_t k = 0; k < vertices.size(); ++k)
    for (std::size_t i = 0; i < 16; ++i) e[i] += weights[k] * vertices[k][i];
  return Behavior::validate(e);
}

inline Behavior uniform_behavior() {
  std::array<Rational, 16> e;
  e.fill(Rational(1, 4));
  return Behavior::validate(e);
}

}  // namespace bellfrac
