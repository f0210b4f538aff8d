#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bellfrac/behavior.hpp"
#include "bellfrac/measures.hpp"
#include "bellfrac/polytopes.hpp"

namespace bellfrac {

/// Inequality system a . q >= b over exact rationals.
struct HPolyhedron {
  std::size_t dim = 0;
  struct Row {
    std::vector<Rational> coeffs;
    Rational offset;
  };
  std::vector<Row> rows;
};

struct VRepresentation {
  std::vector<std::vector<Rational>> vertices;
  std::vector<std::vector<Rational>> rays;  // extreme rays of the recession cone
};

class EmptyPolyhedron : public std::runtime_error {
 public:
  EmptyPolyhedron() : std::runtime_error("polyhedron is empty") {}
};

class DerivationMismatch : public std::runtime_error {
 public:
  explicit DerivationMismatch(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Scales a rational vector to coprime integers (sign preserved).
inline void canonicalize(std::vector<Rational>& v) {
  BigInt lcm = 1;
  for (const auto& x : v) {
    BigInt d = boost::multiprecision::denominator(x);
    lcm = boost::multiprecision::lcm(lcm, d);
  }
  BigInt g = 0;
  std::vector<BigInt> ints(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    ints[i] = boost::multiprecision::numerator(v[i]) *
              (lcm / boost::multiprecision::denominator(v[i]));
    g = boost::multiprecision::gcd(g, ints[i] < 0 ? BigInt(-ints[i]) : ints[i]);
  }
  if (g == 0) return;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = Rational(ints[i] / g);
}

struct Generator {
  std::vector<Rational> v;  // homogeneous coordinates, last = t
  std::uint64_t tight = 0;
};

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) acc += a[i] * b[i];
  return acc;
}

}  // namespace detail

/// Double-description vertex enumeration. The system must contain every
/// non-negativity row q_i >= 0; those seed the starting cone (the
/// non-negative orthant), and the remaining rows are inserted incrementally
/// in their given order.
inline VRepresentation enumerate_vertices(const HPolyhedron& H) {
  const std::size_t d = H.dim;
  const std::size_t D = d + 1;  // homogenized

  // Split off the orthant rows e_i . q >= 0.
  std::vector<bool> have_orthant(d, false);
  std::vector<HPolyhedron::Row> general;
  for (const auto& row : H.rows) {
    std::size_t ones = 0, at = 0;
    bool plain = row.offset == 0;
    for (std::size_t i = 0; plain && i < d; ++i) {
      if (row.coeffs[i] == 0) continue;
      if (row.coeffs[i] > 0 && ones == 0) { ones = 1; at = i; }
      else plain = false;
    }
    if (plain && ones == 1) have_orthant[at] = true;
    else general.push_back(row);
  }
  for (std::size_t i = 0; i < d; ++i)
    if (!have_orthant[i])
      throw std::invalid_argument("enumeration requires all q_i >= 0 rows");

  const std::size_t n_constraints = D + general.size();
  if (n_constraints > 64)
    throw std::invalid_argument("too many inequality rows for this enumerator");

  // Homogenized constraint matrix: orthant of R^{d+1}, then (a, -b) rows.
  std::vector<std::vector<Rational>> cons;
  for (std::size_t i = 0; i < D; ++i) {
    std::vector<Rational> row(D, Rational(0));
    row[i] = 1;
    cons.push_back(std::move(row));
  }
  for (const auto& r : general) {
    std::vector<Rational> row(r.coeffs);
    row.push_back(-r.offset);
    cons.push_back(std::move(row));
  }

  auto tight_set = [&](const std::vector<Rational>& v, std::size_t upto) {
    std::uint64_t bits = 0;
    for (std::size_t c = 0; c < upto; ++c)
      if (detail::dot(cons[c], v) == 0) bits |= std::uint64_t(1) << c;
    return bits;
  };

  std::vector<detail::Generator> gens;
  for (std::size_t i = 0; i < D; ++i) {
    detail::Generator g;
    g.v.assign(D, Rational(0));
    g.v[i] = 1;
    g.tight = tight_set(g.v, D);
    gens.push_back(std::move(g));
  }

  for (std::size_t k = 0; k < general.size(); ++k) {
    const std::size_t cidx = D + k;
    const auto& crow = cons[cidx];

    std::vector<Rational> val(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) val[i] = detail::dot(crow, gens[i].v);

    auto adjacent = [&](std::size_t p, std::size_t n) {
      std::uint64_t T = gens[p].tight & gens[n].tight;
      for (std::size_t o = 0; o < gens.size(); ++o) {
        if (o == p || o == n) continue;
        if ((T & gens[o].tight) == T) return false;
      }
      return true;
    };

    std::vector<detail::Generator> next;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (val[i] > 0) next.push_back(gens[i]);
      else if (val[i] == 0) {
        gens[i].tight |= std::uint64_t(1) << cidx;
        next.push_back(gens[i]);
      }
    }
    for (std::size_t p = 0; p < gens.size(); ++p) {
      if (val[p] <= 0) continue;
      for (std::size_t n = 0; n < gens.size(); ++n) {
        if (val[n] >= 0) continue;
        if (!adjacent(p, n)) continue;
        detail::Generator g;
        g.v.resize(D);
        for (std::size_t i = 0; i < D; ++i)
          g.v[i] = val[p] * gens[n].v[i] - val[n] * gens[p].v[i];
        detail::canonicalize(g.v);
        g.tight = tight_set(g.v, cidx + 1);
        next.push_back(std::move(g));
      }
    }
    gens = std::move(next);
    if (gens.empty()) throw EmptyPolyhedron();
  }

  VRepresentation out;
  for (const auto& g : gens) {
    const Rational& t = g.v[d];
    if (t > 0) {
      std::vector<Rational> vert(d);
      for (std::size_t i = 0; i < d; ++i) vert[i] = g.v[i] / t;
      out.vertices.push_back(std::move(vert));
    } else {
      std::vector<Rational> ray(g.v.begin(), g.v.begin() + d);
      detail::canonicalize(ray);
      out.rays.push_back(std::move(ray));
    }
  }
  if (out.vertices.empty()) throw EmptyPolyhedron();
  std::sort(out.vertices.begin(), out.vertices.end());
  std::sort(out.rays.begin(), out.rays.end());
  return out;
}

namespace detail {

/// H-system {V^T q >= 1, q >= 0} for a list of polytope-vertex columns.
inline HPolyhedron dual_system(const std::vector<Behavior>& columns) {
  HPolyhedron H;
  H.dim = 16;
  for (std::size_t i = 0; i < 16; ++i) {
    HPolyhedron::Row row;
    row.coeffs.assign(16, Rational(0));
    row.coeffs[i] = 1;
    row.offset = 0;
    H.rows.push_back(std::move(row));
  }
  for (const auto& col : columns) {
    HPolyhedron::Row row;
    row.coeffs.assign(col.entries().begin(), col.entries().end());
    row.offset = 1;
    H.rows.push_back(std::move(row));
  }
  return H;
}

inline bool is_normalization_vector(const std::vector<Rational>& v) {
  for (int ctx = 0; ctx < 4; ++ctx) {
    bool all_one = true;
    for (int j = 0; j < 4; ++j)
      if (v[4 * ctx + j] != 1) { all_one = false; break; }
    if (!all_one) continue;
    bool rest_zero = true;
    for (int i = 0; i < 16; ++i)
      if (i / 4 != ctx && v[i] != 0) { rest_zero = false; break; }
    if (rest_zero) return true;
  }
  return false;
}

inline std::vector<std::array<Rational, 16>> strip_normalization(
    const VRepresentation& vr, std::size_t expect_raw, std::size_t expect_kept) {
  if (vr.vertices.size() != expect_raw)
    throw DerivationMismatch("expected " + std::to_string(expect_raw) +
                             " raw vertices, got " + std::to_string(vr.vertices.size()));
  std::vector<std::array<Rational, 16>> kept;
  for (const auto& v : vr.vertices) {
    if (is_normalization_vector(v)) continue;
    std::array<Rational, 16> a;
    std::copy(v.begin(), v.end(), a.begin());
    kept.push_back(a);
  }
  if (kept.size() != expect_kept)
    throw DerivationMismatch("expected " + std::to_string(expect_kept) +
                             " non-trivial vertices, got " + std::to_string(kept.size()));
  return kept;
}

}  // namespace detail

/// Independently re-derives the 128-vector local solution set from the dual
/// polyhedron of the 16 deterministic strategies.
inline std::vector<std::array<Rational, 16>> derive_Q() {
  auto vr = enumerate_vertices(detail::dual_system(local_strategies()));
  return detail::strip_normalization(vr, 132, 128);
}

/// Re-derives the 120-vector non-signaling solution set from the dual
/// polyhedron of all 24 non-signaling vertices.
inline std::vector<std::array<Rational, 16>> derive_S() {
  auto vr = enumerate_vertices(detail::dual_system(ns_vertices()));
  return detail::strip_normalization(vr, 124, 120);
}

/// Set equality between a derived vertex list and an orbit-built vector set.
inline bool same_vector_set(std::vector<std::array<Rational, 16>> derived,
                            const std::vector<MeasureVector>& built) {
  std::vector<std::array<Rational, 16>> target;
  for (const auto& m : built) {
    std::array<Rational, 16> a;
    for (std::size_t i = 0; i < 16; ++i) a[i] = m.coeffs[i];
    target.push_back(a);
  }
  std::sort(derived.begin(), derived.end());
  std::sort(target.begin(), target.end());
  return derived == target;
}

}  // namespace bellfrac
