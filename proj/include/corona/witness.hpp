#pragma once

// Witness families mu_n on the projective line and the defects they leave:
//   boundary_defect = || mu_n(g t) - g mu_n(t) ||
//   pair_defect     = || zeta_n(g y) - g zeta_n(y) || + || zeta_n(x + y + x') - zeta_n(y) ||
// with zeta_n = mu_n o phi. All values are exact rationals.

#include "corona/farey_walk.hpp"
#include "corona/group_measure.hpp"
#include "corona/higson.hpp"
#include "corona/integer.hpp"
#include "corona/modular_group.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace corona {

/// Uniform measure on the first n walk elements (naive, tails), or the
/// half-half mixture of the first n own and mirror elements (symmetrized).
template <class Int, class Count = BigInt>
basic_group_measure<Int, Count> mu(const basic_projective_point<Int>& t, std::uint64_t n, WalkVariant family) {
  if (n == 0) throw std::invalid_argument("prefix length must be positive");
  basic_walk_stream<Int> w(t, family);
  std::vector<typename basic_group_measure<Int, Count>::atom> atoms;
  while (atoms.size() < (family == WalkVariant::symmetrized ? 2 * n : n) && w.has_next()) {
    auto step = w.next_step();
    atoms.emplace_back(step.own, Count(1));
    if (family == WalkVariant::symmetrized) atoms.emplace_back(step.mirror, Count(1));
  }
  return basic_group_measure<Int, Count>::from_counts(std::move(atoms));
}

template <class Int, class Count = BigInt>
Rational boundary_defect(const basic_group_element<Int>& g, const basic_projective_point<Int>& t, std::uint64_t n,
                         WalkVariant family) {
  return l1_distance(mu<Int, Count>(act_boundary(g, t), n, family), translate(g, mu<Int, Count>(t, n, family)));
}

template <class Int, class Count = BigInt>
basic_group_measure<Int, Count> zeta_n(const basic_lattice_vector<Int>& y, std::uint64_t n, WalkVariant family) {
  return mu<Int, Count>(phi(y), n, family);
}

/// Throws std::domain_error when y or x + y + x' is 0.
template <class Int, class Count = BigInt>
Rational pair_defect(const basic_group_element<Int>& g, const basic_lattice_vector<Int>& x,
                     const basic_lattice_vector<Int>& x1, const basic_lattice_vector<Int>& y, std::uint64_t n,
                     WalkVariant family) {
  if (y.is_zero()) throw std::domain_error("pair defect undefined at y = 0");
  auto shifted = x + y + x1;
  if (shifted.is_zero()) throw std::domain_error("pair defect undefined where x + y + x' = 0");
  auto zy = zeta_n<Int, Count>(y, n, family);
  return l1_distance(zeta_n<Int, Count>(act_lattice(g, y), n, family), translate(g, zy)) +
         l1_distance(zeta_n<Int, Count>(shifted, n, family), zy);
}

// ---------------------------------------------------------------------------
// Batch engine over 64-bit checked arithmetic with a per-instance cache of
// walk measures. Used by the suite sweeps and the window scans; its results
// are cross-checked against the functions above in the tests.

using Key = std::array<std::int64_t, 4>;

/// A measure with equal weights 1/total on a multiset of classes, as a sorted
/// list of canonical keys (repeats allowed).
struct CompactMeasure {
  std::vector<Key> keys;
  std::int64_t total = 1;
};

inline Key key_of(const basic_group_element<checked_int64>& g) {
  auto c = g.canonical();
  return {c.a().value(), c.b().value(), c.c().value(), c.d().value()};
}

inline basic_group_element<checked_int64> element_of(const Key& k) {
  return basic_group_element<checked_int64>::trusted(k[0], k[1], k[2], k[3]);
}

/// sum over classes of |count_x * total_y - count_y * total_x|.
inline std::int64_t l1_numerator(const CompactMeasure& x, const CompactMeasure& y) {
  const auto& a = x.keys;
  const auto& b = y.keys;
  const checked_int64 dx = x.total, dy = y.total;
  checked_int64 sum = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    const Key& k = (j == b.size() || (i < a.size() && a[i] < b[j])) ? a[i] : b[j];
    std::int64_t ca = 0, cb = 0;
    while (i < a.size() && a[i] == k) ++i, ++ca;
    while (j < b.size() && b[j] == k) ++j, ++cb;
    checked_int64 d = checked_int64(ca) * dy - checked_int64(cb) * dx;
    sum += d < 0 ? -d : d;
  }
  return sum.value();
}

inline Rational l1_distance(const CompactMeasure& x, const CompactMeasure& y) {
  return Rational(BigInt(l1_numerator(x, y)), BigInt(x.total) * BigInt(y.total));
}

inline CompactMeasure translate(const basic_group_element<checked_int64>& g, const CompactMeasure& m) {
  CompactMeasure out;
  out.total = m.total;
  out.keys.reserve(m.keys.size());
  for (const auto& k : m.keys) out.keys.push_back(key_of(g * element_of(k)));
  std::sort(out.keys.begin(), out.keys.end());
  return out;
}

using SmallPoint = basic_projective_point<checked_int64>;
using SmallVector = basic_lattice_vector<checked_int64>;
using SmallElement = basic_group_element<checked_int64>;

inline CompactMeasure compact_mu(const SmallPoint& t, std::uint64_t n, WalkVariant family) {
  basic_walk_stream<checked_int64> w(t, family);
  CompactMeasure m;
  const bool sym = family == WalkVariant::symmetrized;
  m.keys.reserve(sym ? 2 * n : n);
  while (m.keys.size() < (sym ? 2 * n : n) && w.has_next()) {
    auto step = w.next_step();
    m.keys.push_back(key_of(step.own.element()));
    if (sym) m.keys.push_back(key_of(step.mirror.element()));
  }
  m.total = static_cast<std::int64_t>(m.keys.size());
  std::sort(m.keys.begin(), m.keys.end());
  return m;
}

struct PairMax {
  Rational total{0};
  Rational group_part{0};  // max over g of || zeta(g y) - g zeta(y) ||
  Rational shift_part{0};  // max over a of || zeta(y + a) - zeta(y) ||
  std::size_t argmax_g = 0;
  SmallVector argmax_a{};
};

class WitnessEngine {
 public:
  WitnessEngine(WalkVariant family, std::uint64_t prefix, std::size_t cache_limit = 1 << 16)
      : family_(family), prefix_(prefix), cache_limit_(cache_limit) {
    if (prefix == 0) throw std::invalid_argument("prefix length must be positive");
  }

  [[nodiscard]] WalkVariant family() const { return family_; }
  [[nodiscard]] std::uint64_t prefix() const { return prefix_; }

  const CompactMeasure& measure(const SmallPoint& t) {
    auto key = std::make_pair(t.m().value(), t.n().value());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    if (cache_.size() >= cache_limit_) cache_.clear();
    return cache_.emplace(key, compact_mu(t, prefix_, family_)).first->second;
  }

  Rational boundary_defect(const SmallElement& g, const SmallPoint& t) {
    CompactMeasure moved = translate(g, measure(t));
    return l1_distance(measure(act_boundary(g, t)), moved);
  }

  Rational shift_defect(const SmallVector& y, const SmallVector& a) {
    auto z = y + a;
    if (y.is_zero() || z.is_zero()) throw std::domain_error("shift defect undefined at 0");
    CompactMeasure here = measure(phi(y));
    return l1_distance(measure(phi(z)), here);
  }

  /// max over g in group, a in box(radius) with y + a != 0 of pair_defect,
  /// using that the two summands depend on g and on a = x + x' separately.
  PairMax pair_max(const SmallVector& y, const std::vector<SmallElement>& group, std::int64_t radius) {
    if (y.is_zero()) throw std::domain_error("pair defect undefined at y = 0");
    PairMax r;
    const SmallPoint t = phi(y);
    for (std::size_t i = 0; i < group.size(); ++i) {
      Rational d = boundary_defect(group[i], t);
      if (d > r.group_part) {
        r.group_part = d;
        r.argmax_g = i;
      }
    }
    CompactMeasure here = measure(t);
    for (std::int64_t a1 = -radius; a1 <= radius; ++a1) {
      for (std::int64_t a2 = -radius; a2 <= radius; ++a2) {
        SmallVector z{y.m + a1, y.n + a2};
        if (z.is_zero()) continue;
        Rational d = l1_distance(measure(phi(z)), here);
        if (d > r.shift_part) {
          r.shift_part = d;
          r.argmax_a = {a1, a2};
        }
      }
    }
    r.total = r.group_part + r.shift_part;
    return r;
  }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& p) const noexcept {
      std::size_t seed = std::hash<std::int64_t>{}(p.first);
      hash_combine(seed, std::hash<std::int64_t>{}(p.second));
      return seed;
    }
  };

  WalkVariant family_;
  std::uint64_t prefix_;
  std::size_t cache_limit_;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, CompactMeasure, PairHash> cache_;
};

}  // namespace corona
