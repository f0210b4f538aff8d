#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellfrac/behavior.hpp"

namespace bellfrac {

enum class VectorClass { F, G, T, S, Z, E };
enum class OrbitTag { Alpha, Beta, Gamma, Delta };

inline const char* class_token(VectorClass c) {
  switch (c) {
    case VectorClass::F: return "f";
    case VectorClass::G: return "g";
    case VectorClass::T: return "t";
    case VectorClass::S: return "s";
    case VectorClass::Z: return "z";
    case VectorClass::E: return "e";
  }
  return "?";
}

inline const char* orbit_token(OrbitTag o) {
  switch (o) {
    case OrbitTag::Alpha: return "alpha";
    case OrbitTag::Beta: return "beta";
    case OrbitTag::Gamma: return "gamma";
    case OrbitTag::Delta: return "delta";
  }
  return "?";
}

/// One dual-polyhedron vertex: 16 small non-negative integer coefficients
/// whose inner product with a behavior bounds the fraction from above.
struct MeasureVector {
  std::array<int, 16> coeffs{};
  VectorClass cls = VectorClass::F;
  OrbitTag orbit = OrbitTag::Alpha;
  int id = 0;

  friend bool operator==(const MeasureVector& a, const MeasureVector& b) {
    return a.coeffs == b.coeffs;
  }
};

/// An index permutation of the 16 flat components, with the generator word
/// that produced it (0=a-flip, 1=b-flip, 2=x-flip, 3=y-flip, 4=party-swap).
struct SymmetryOp {
  std::array<int, 16> perm{};
  std::vector<int> word;
};

namespace detail {

inline std::array<int, 16> generator_perm(int which) {
  std::array<int, 16> p{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
          std::size_t from = flat_index(a, b, x, y);
          std::size_t to = 0;
          switch (which) {
            case 0: to = flat_index(1 - a, b, x, y); break;
            case 1: to = flat_index(a, 1 - b, x, y); break;
            case 2: to = flat_index(a, b, 1 - x, y); break;
            case 3: to = flat_index(a, b, x, 1 - y); break;
            case 4: to = flat_index(b, a, y, x); break;
          }
          p[from] = static_cast<int>(to);
        }
  return p;
}

}  // namespace detail

/// The full 32-element group generated by the two outcome flips, the two
/// setting flips, and the party swap.
inline std::vector<SymmetryOp> symmetry_group() {
  std::array<int, 16> identity{};
  for (int i = 0; i < 16; ++i) identity[i] = i;

  std::vector<SymmetryOp> group;
  group.push_back({identity, {}});
  std::set<std::array<int, 16>> seen{identity};

  // BFS closure over the five generators.
  for (std::size_t head = 0; head < group.size(); ++head) {
    for (int g = 0; g < 5; ++g) {
      auto gen = detail::generator_perm(g);
      const SymmetryOp base = group[head];
      std::array<int, 16> composed{};
      for (int i = 0; i < 16; ++i) composed[i] = gen[base.perm[i]];
      if (seen.insert(composed).second) {
        auto word = base.word;
        word.push_back(g);
        group.push_back({composed, std::move(word)});
      }
    }
  }
  return group;
}

template <typename T>
inline std::array<T, 16> apply_perm(const std::array<int, 16>& perm,
                                    const std::array<T, 16>& v) {
  std::array<T, 16> out{};
  for (int i = 0; i < 16; ++i) out[perm[i]] = v[i];
  return out;
}

inline Behavior apply_symmetry(const SymmetryOp& op, const Behavior& B) {
  return Behavior::validate(apply_perm(op.perm, B.entries()));
}

/// The eleven orbit representatives generating the two solution sets.
inline std::vector<MeasureVector> orbit_representatives() {
  using C = VectorClass;
  using O = OrbitTag;
  return {
      {{1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}, C::F, O::Alpha},
      {{1, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1, 0, 0, 0, 0}, C::G, O::Beta},
      {{1, 1, 0, 0, 0, 0, 1, 0, 1, 1, 0, 0, 0, 0, 0, 1}, C::T, O::Beta},
      {{1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 1, 0, 0}, C::T, O::Gamma},
      {{1, 1, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1}, C::S, O::Beta},
      {{1, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0}, C::S, O::Gamma},
      {{1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0}, C::S, O::Delta},
      {{2, 1, 1, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1}, C::Z, O::Beta},
      {{2, 1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 1, 0, 0, 0}, C::Z, O::Gamma},
      {{2, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0}, C::Z, O::Delta},
      {{1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0}, C::E, O::Alpha},
  };
}

/// The deduplicated orbit of a representative under the full group.
inline std::vector<MeasureVector> orbit(const MeasureVector& rep) {
  std::set<std::array<int, 16>> seen;
  std::vector<MeasureVector> out;
  for (const auto& op : symmetry_group()) {
    MeasureVector v = rep;
    v.coeffs = apply_perm(op.perm, rep.coeffs);
    if (seen.insert(v.coeffs).second) out.push_back(v);
  }
  return out;
}

namespace detail {

inline bool measure_order(const MeasureVector& a, const MeasureVector& b) {
  if (a.cls != b.cls) return static_cast<int>(a.cls) < static_cast<int>(b.cls);
  if (a.orbit != b.orbit) return static_cast<int>(a.orbit) < static_cast<int>(b.orbit);
  return a.coeffs < b.coeffs;
}

inline std::vector<MeasureVector> build_from_reps(
    const std::vector<MeasureVector>& reps) {
  std::vector<MeasureVector> all;
  for (const auto& rep : reps)
    for (auto& v : orbit(rep)) all.push_back(v);
  std::sort(all.begin(), all.end(), measure_order);
  for (std::size_t i = 0; i < all.size(); ++i) all[i].id = static_cast<int>(i) + 1;
  return all;
}

}  // namespace detail

/// The 128-vector solution set for the local fraction (classes f/g/t/s/e),
/// numbered in canonical sorted order.
inline std::vector<MeasureVector> build_Q() {
  auto reps = orbit_representatives();
  std::vector<MeasureVector> use;
  for (const auto& r : reps)
    if (r.cls != VectorClass::Z) use.push_back(r);
  return detail::build_from_reps(use);
}

/// The 120-vector solution set for the non-signaling fraction (f/g/t/z).
inline std::vector<MeasureVector> build_S() {
  auto reps = orbit_representatives();
  std::vector<MeasureVector> use;
  for (const auto& r : reps)
    if (r.cls != VectorClass::S && r.cls != VectorClass::E) use.push_back(r);
  return detail::build_from_reps(use);
}

inline Rational evaluate(const MeasureVector& v, const Behavior& B) {
  Rational acc = 0;
  for (std::size_t i = 0; i < 16; ++i)
    if (v.coeffs[i] != 0) acc += v.coeffs[i] * B[i];
  return acc;
}

inline double evaluate_f64(const MeasureVector& v, const std::array<double, 16>& p) {
  double acc = 0;
  for (std::size_t i = 0; i < 16; ++i) acc += v.coeffs[i] * p[i];
  return acc;
}

struct FractionResult {
  Rational value;
  std::vector<int> minimizers;          // ids, ascending
  std::set<VectorClass> minimizing_classes;
  bool unique = false;
};

/// Exact minimum of the vector measures over a solution set, clamped to 1
/// (the clamp stands in for the four always-1 normalization vertices, which
/// are excluded from minimizer reporting).
inline FractionResult min_over_set(const std::vector<MeasureVector>& set,
                                   const Behavior& B) {
  FractionResult res;
  Rational best;
  bool have = false;
  std::vector<const MeasureVector*> argmins;
  for (const auto& v : set) {
    Rational val = evaluate(v, B);
    if (!have || val < best) {
      best = val;
      argmins = {&v};
      have = true;
    } else if (val == best) {
      argmins.push_back(&v);
    }
  }
  if (!have) throw std::logic_error("empty measure-vector set");
  if (best > 1) {
    res.value = 1;
    return res;
  }
  res.value = best;
  for (const auto* v : argmins) {
    res.minimizers.push_back(v->id);
    res.minimizing_classes.insert(v->cls);
  }
  std::sort(res.minimizers.begin(), res.minimizers.end());
  res.unique = res.minimizers.size() == 1;
  return res;
}

inline FractionResult local_fraction(const Behavior& B) {
  static const std::vector<MeasureVector> Q = build_Q();
  return min_over_set(Q, B);
}

inline FractionResult ns_fraction(const Behavior& B) {
  static const std::vector<MeasureVector> S = build_S();
  return min_over_set(S, B);
}

class NotNonsignaling : public std::runtime_error {
 public:
  NotNonsignaling() : std::runtime_error("behavior is signaling (max signaling > 0)") {}
};

/// Closed form for non-signaling behaviors: min{1, (4 - S)/2}.
inline Rational local_fraction_ns_formula(const Behavior& B) {
  BehaviorStats st = compute_stats(B);
  if (st.delta_max != 0) throw NotNonsignaling();
  Rational v = (4 - st.chsh_max) / 2;
  return v < 1 ? v : Rational(1);
}

/// Max signaling recovered from the f-vectors alone: 1 - min_j f_j . P.
inline Rational max_signaling_via_f(const Behavior& B) {
  static const std::vector<MeasureVector> Q = build_Q();
  Rational best;
  bool have = false;
  for (const auto& v : Q) {
    if (v.cls != VectorClass::F) continue;
    Rational val = evaluate(v, B);
    if (!have || val < best) {
      best = val;
      have = true;
    }
  }
  return 1 - best;
}

class DataMismatch : public std::runtime_error {
 public:
  explicit DataMismatch(const std::string& what) : std::runtime_error(what) {}
};

inline void write_vectors(std::ostream& os, const std::vector<MeasureVector>& vecs) {
  for (const auto& v : vecs) {
    for (int c : v.coeffs) os << c << ' ';
    os << class_token(v.cls) << ' ' << orbit_token(v.orbit) << '\n';
  }
}

inline void write_vectors_file(const std::string& path,
                               const std::vector<MeasureVector>& vecs) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_vectors(os, vecs);
}

inline std::vector<MeasureVector> read_vectors(std::istream& is) {
  std::vector<MeasureVector> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    MeasureVector v;
    for (int i = 0; i < 16; ++i)
      if (!(ls >> v.coeffs[i]))
        throw std::runtime_error("bad vector line: " + line);
    std::string cls, orb;
    if (!(ls >> cls >> orb)) throw std::runtime_error("bad vector line: " + line);
    if (cls == "f") v.cls = VectorClass::F;
    else if (cls == "g") v.cls = VectorClass::G;
    else if (cls == "t") v.cls = VectorClass::T;
    else if (cls == "s") v.cls = VectorClass::S;
    else if (cls == "z") v.cls = VectorClass::Z;
    else if (cls == "e") v.cls = VectorClass::E;
    else throw std::runtime_error("unknown class token: " + cls);
    if (orb == "alpha") v.orbit = OrbitTag::Alpha;
    else if (orb == "beta") v.orbit = OrbitTag::Beta;
    else if (orb == "gamma") v.orbit = OrbitTag::Gamma;
    else if (orb == "delta") v.orbit = OrbitTag::Delta;
    else throw std::runtime_error("unknown orbit token: " + orb);
    v.id = static_cast<int>(out.size()) + 1;
    out.push_back(v);
  }
  return out;
}

inline std::vector<MeasureVector> read_vectors_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_vectors(is);
}

/// Asserts that a shipped data file matches a regenerated set exactly
/// (as ordered lists; both use the canonical sort).
inline void check_against_file(const std::vector<MeasureVector>& built,
                               const std::string& path) {
  auto shipped = read_vectors_file(path);
  if (shipped.size() != built.size())
    throw DataMismatch(path + ": expected " + std::to_string(built.size()) +
                       " vectors, file has " + std::to_string(shipped.size()));
  for (std::size_t i = 0; i < built.size(); ++i) {
    if (shipped[i].coeffs != built[i].coeffs || shipped[i].cls != built[i].cls ||
        shipped[i].orbit != built[i].orbit)
      throw DataMismatch(path + ": mismatch at line " + std::to_string(i + 1));
  }
}

}  // namespace bellfrac
