#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellfrac/behavior.hpp"
#include "bellfrac/measures.hpp"

namespace bellfrac {

/// Counter-based 64-bit generator ("sm64c-v1"): output k of stream s is
/// mix(base(seed, s) + k * golden), with the splitmix64 finalizer as mix.
/// Distinct stream ids give disjoint substreams for parallel workers, and any
/// draw is addressable without sequencing through its predecessors.
class CounterRng {
 public:
  static constexpr const char* kName = "sm64c-v1";

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : base_(mix(seed + kGolden * mix(stream + 1))) {}

  std::uint64_t next() { return mix(base_ + kGolden * ++counter_); }

  /// Uniform draw in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Unit-rate exponential draw (never -inf: the argument stays in (0, 1]).
  double exponential() { return -std::log(1.0 - uniform01()); }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

struct SampleConfig {
  std::size_t n = 1;
  std::uint64_t seed = 0;
  double uniqueness_gap = 1e-12;
};

/// One random behavior in binary64: each context block drawn from a flat
/// Dirichlet(1,1,1,1) via four exponential draws, normalized to sum 1.
inline std::array<double, 16> random_behavior(CounterRng& rng) {
  std::array<double, 16> p;
  for (int ctx = 0; ctx < 4; ++ctx) {
    double sum = 0;
    for (int j = 0; j < 4; ++j) {
      p[4 * ctx + j] = rng.exponential();
      sum += p[4 * ctx + j];
    }
    for (int j = 0; j < 4; ++j) p[4 * ctx + j] /= sum;
  }
  return p;
}

/// Random exact-rational behavior: each entry an integer in [1, 2^16] over a
/// common block denominator, then the block divided by its exact sum. Used by
/// the exact cross-check suites, where float samples would not do.
inline Behavior random_rational_behavior(CounterRng& rng) {
  std::array<Rational, 16> e;
  for (int ctx = 0; ctx < 4; ++ctx) {
    Rational sum = 0;
    for (int j = 0; j < 4; ++j) {
      e[4 * ctx + j] = Rational((rng.next() & 0xffff) + 1);
      sum += e[4 * ctx + j];
    }
    for (int j = 0; j < 4; ++j) e[4 * ctx + j] /= sum;
  }
  return Behavior::validate(e);
}

namespace detail {

/// Class attribution of one float sample: the class of the minimizing vector,
/// or nothing when a different class comes within `gap` of the minimum.
/// Intra-class ties are harmless and count toward the class.
inline std::optional<VectorClass> attribute_class(
    const std::vector<MeasureVector>& set, const std::array<double, 16>& p,
    double gap) {
  double best = 0;
  VectorClass best_cls = VectorClass::F;
  double best_other = 0;  // lowest value over the non-minimizing classes
  bool have = false, have_other = false;
  for (const auto& v : set) {
    double val = evaluate_f64(v, p);
    if (!have) {
      best = val;
      best_cls = v.cls;
      have = true;
      continue;
    }
    if (val < best) {
      if (v.cls != best_cls) {
        best_other = best;
        have_other = true;
      }
      // else best_other is unchanged: the displaced minimum shared the class
      best = val;
      best_cls = v.cls;
    } else if (v.cls != best_cls && (!have_other || val < best_other)) {
      best_other = val;
      have_other = true;
    }
  }
  if (have_other && best_other - best <= gap) return std::nullopt;
  return best_cls;
}

}  // namespace detail

struct PrevalenceReport {
  std::string rng_name = CounterRng::kName;
  std::string set_name;  // "Q" or "S"
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::map<VectorClass, std::size_t> counts;
  std::size_t ties_discarded = 0;

  double percentage(VectorClass c) const {
    auto it = counts.find(c);
    return it == counts.end() ? 0.0 : 100.0 * static_cast<double>(it->second) / n;
  }
};

struct MigrationReport {
  std::string rng_name = CounterRng::kName;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  // (class under the local set, class under the non-signaling set) -> count,
  // recorded only when the class changes.
  std::map<std::pair<VectorClass, VectorClass>, std::size_t> transitions;
  std::size_t unchanged = 0;
  std::size_t ties_discarded = 0;
};

enum class VectorSet { Q, S };

inline PrevalenceReport prevalence(const SampleConfig& cfg, VectorSet which) {
  if (cfg.n < 1) throw std::invalid_argument("sample count must be >= 1");
  static const std::vector<MeasureVector> Q = build_Q();
  static const std::vector<MeasureVector> S = build_S();
  const auto& set = which == VectorSet::Q ? Q : S;

  PrevalenceReport rep;
  rep.set_name = which == VectorSet::Q ? "Q" : "S";
  rep.n = cfg.n;
  rep.seed = cfg.seed;
  CounterRng rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    auto p = random_behavior(rng);
    auto cls = detail::attribute_class(set, p, cfg.uniqueness_gap);
    if (cls) ++rep.counts[*cls];
    else ++rep.ties_discarded;
  }
  return rep;
}

inline MigrationReport migration(const SampleConfig& cfg) {
  if (cfg.n < 1) throw std::invalid_argument("sample count must be >= 1");
  static const std::vector<MeasureVector> Q = build_Q();
  static const std::vector<MeasureVector> S = build_S();

  MigrationReport rep;
  rep.n = cfg.n;
  rep.seed = cfg.seed;
  CounterRng rng(cfg.seed);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    auto p = random_behavior(rng);
    auto from = detail::attribute_class(Q, p, cfg.uniqueness_gap);
    auto to = detail::attribute_class(S, p, cfg.uniqueness_gap);
    if (!from || !to) {
      ++rep.ties_discarded;
      continue;
    }
    if (*from == *to) ++rep.unchanged;
    else ++rep.transitions[{*from, *to}];
  }
  return rep;
}

class DegenerateRow : public std::runtime_error {
 public:
  explicit DegenerateRow(int context)
      : std::runtime_error("witness block " + std::to_string(context) +
                           " has no zero coefficient to complement"),
        context(context) {}
  int context;
};

/// Exact non-redundancy witness for one measure vector: complement its
/// coefficients within each context block (1 -> 0, 0 -> 1, 2 -> 0) and
/// normalize each block. The vector scores exactly 0 on the result, and every
/// other vector of its set scores strictly positive.
inline Behavior witness(const MeasureVector& v) {
  std::array<Rational, 16> e;
  for (int ctx = 0; ctx < 4; ++ctx) {
    int zeros = 0;
    for (int j = 0; j < 4; ++j) zeros += v.coeffs[4 * ctx + j] == 0;
    if (zeros == 0) throw DegenerateRow(ctx);
    for (int j = 0; j < 4; ++j)
      e[4 * ctx + j] = v.coeffs[4 * ctx + j] == 0 ? Rational(1, zeros) : Rational(0);
  }
  return Behavior::validate(e);
}

// ---- report serialization ----

inline std::string prevalence_csv(const PrevalenceReport& rep) {
  std::ostringstream os;
  os << "class,count,percentage\n";
  for (const auto& [cls, count] : rep.counts) {
    os << class_token(cls) << ',' << count << ',' << rep.percentage(cls) << '\n';
  }
  os << "ties," << rep.ties_discarded << ','
     << 100.0 * static_cast<double>(rep.ties_discarded) / rep.n << '\n';
  return os.str();
}

inline std::string migration_csv(const MigrationReport& rep) {
  std::ostringstream os;
  os << "from,to,count\n";
  for (const auto& [key, count] : rep.transitions)
    os << class_token(key.first) << ',' << class_token(key.second) << ',' << count << '\n';
  return os.str();
}

}  // namespace bellfrac
