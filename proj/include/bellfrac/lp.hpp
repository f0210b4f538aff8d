#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "bellfrac/behavior.hpp"
#include "bellfrac/measures.hpp"
#include "bellfrac/polytopes.hpp"

namespace bellfrac {

enum class Target { Local, NS };

struct PrimalSolution {
  Rational p_star;
  std::vector<Rational> weights;  // one per polytope vertex
  std::vector<int> basis;         // final basic variable indices
};

/// Convex split p * inner + (1 - p) * outer of a behavior, with the inner
/// part inside the target polytope. inner is absent when p = 0, outer when
/// p = 1.
struct Decomposition {
  Rational p;
  std::optional<Behavior> inner;
  std::optional<Behavior> outer;
};

namespace detail {

/// Dense-tableau simplex with Bland's rule, maximizing 1.p subject to
/// V p <= b, p >= 0. b >= 0 so the slack basis is feasible from the start.
inline PrimalSolution simplex_max_sum(const std::vector<Behavior>& vertices,
                                      const Behavior& B) {
  const std::size_t n = vertices.size();
  const std::size_t m = 16;
  const std::size_t cols = n + m + 1;  // structural, slack, rhs

  std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(cols, Rational(0)));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = vertices[j][i];
    tab[i][n + i] = 1;
    tab[i][cols - 1] = B[i];
  }
  std::vector<Rational> obj(cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) obj[j] = -1;

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j)
      if (obj[j] < 0) { enter = j; break; }  // Bland: lowest index
    if (enter == cols) break;

    std::size_t leave = m;
    Rational best_ratio;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= 0) continue;
      Rational ratio = tab[i][cols - 1] / tab[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m)
      throw std::logic_error("unbounded LP; input is not a normalized behavior");

    Rational pivot = tab[leave][enter];
    for (auto& v : tab[leave]) v /= pivot;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave) continue;
      Rational factor = tab[i][enter];
      if (factor == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) tab[i][j] -= factor * tab[leave][j];
    }
    Rational factor = obj[enter];
    if (factor != 0)
      for (std::size_t j = 0; j < cols; ++j) obj[j] -= factor * tab[leave][j];
    basis[leave] = enter;
  }

  PrimalSolution sol;
  sol.weights.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i) {
    sol.basis.push_back(static_cast<int>(basis[i]));
    if (basis[i] < n) sol.weights[basis[i]] = tab[i][cols - 1];
  }
  sol.p_star = obj[cols - 1];
  return sol;
}

inline const std::vector<Behavior>& target_vertices(Target t) {
  static const std::vector<Behavior> locals = local_strategies();
  static const std::vector<Behavior> ns = ns_vertices();
  return t == Target::Local ? locals : ns;
}

}  // namespace detail

/// Exact optimum of the local-fraction primal LP.
inline PrimalSolution solve_local_primal(const Behavior& B) {
  return detail::simplex_max_sum(detail::target_vertices(Target::Local), B);
}

/// Exact optimum of the non-signaling-fraction primal LP.
inline PrimalSolution solve_ns_primal(const Behavior& B) {
  return detail::simplex_max_sum(detail::target_vertices(Target::NS), B);
}

inline PrimalSolution solve_primal(const Behavior& B, Target t) {
  return detail::simplex_max_sum(detail::target_vertices(t), B);
}

/// Recovers the convex decomposition witnessed by an optimal primal solution.
inline Decomposition extract_decomposition(const Behavior& B,
                                           const PrimalSolution& sol, Target target) {
  const auto& vertices = detail::target_vertices(target);
  if (sol.weights.size() != vertices.size())
    throw std::invalid_argument("solution does not match target vertex count");

  std::array<Rational, 16> combo{};
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (sol.weights[k] == 0) continue;
    for (std::size_t i = 0; i < 16; ++i) combo[i] += sol.weights[k] * vertices[k][i];
  }

  Decomposition d;
  d.p = sol.p_star;
  if (d.p > 0) {
    std::array<Rational, 16> inner;
    for (std::size_t i = 0; i < 16; ++i) inner[i] = combo[i] / d.p;
    d.inner = Behavior::validate(inner);
  }
  if (d.p < 1) {
    std::array<Rational, 16> outer;
    for (std::size_t i = 0; i < 16; ++i) outer[i] = (B[i] - combo[i]) / (1 - d.p);
    d.outer = Behavior::validate(outer);
  }
  return d;
}

/// Value of the dual LP, realized as the clamped minimum over the
/// enumerated dual-vertex set; strong duality makes it equal the primal.
inline Rational dual_value(const Behavior& B, Target target) {
  return target == Target::Local ? local_fraction(B).value : ns_fraction(B).value;
}

}  // namespace bellfrac
