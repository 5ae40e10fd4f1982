#pragma once

// Pair-defect sweeps over the sample suites: for every suite point y the
// maximum of pair_defect(g, x, x', y, n) over g in E_1 and x, x' in F_1.
// Points whose walks outgrow 64-bit entries are recomputed in BigInt.

#include "corona/parallel.hpp"
#include "corona/suites.hpp"
#include "corona/witness.hpp"
#include "corona/zeta_builder.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace corona {

struct DefectRow {
  std::string suite;
  std::size_t index = 0;
  LatticeVector y;
  std::uint64_t n = 0;
  Rational group_part{0};
  Rational shift_part{0};
  Rational total{0};
  std::size_t argmax_g = 0;  // index into enumerate_E(1)
  LatticeVector argmax_a;    // a = x + x'
  bool wide = false;         // needed arbitrary precision
};

namespace detail {

inline DefectRow pair_max_wide(const LatticeVector& y, std::uint64_t n, WalkVariant family,
                               const std::vector<PslClass>& group, std::int64_t radius) {
  DefectRow r;
  r.wide = true;
  const auto t = phi(y);
  for (std::size_t i = 0; i < group.size(); ++i) {
    Rational d = boundary_defect(group[i].element(), t, n, family);
    if (d > r.group_part) {
      r.group_part = d;
      r.argmax_g = i;
    }
  }
  const auto here = mu(t, n, family);
  for (std::int64_t a1 = -radius; a1 <= radius; ++a1)
    for (std::int64_t a2 = -radius; a2 <= radius; ++a2) {
      LatticeVector z{y.m + a1, y.n + a2};
      if (z.is_zero()) continue;
      Rational d = l1_distance(mu(phi(z), n, family), here);
      if (d > r.shift_part) {
        r.shift_part = d;
        r.argmax_a = {BigInt(a1), BigInt(a2)};
      }
    }
  r.total = r.group_part + r.shift_part;
  return r;
}

}  // namespace detail

/// One row per suite point, in suite order.
inline std::vector<DefectRow> sweep_suite(const Suite& suite, std::uint64_t n, WalkVariant family, unsigned jobs = 1) {
  if (n == 0) throw std::invalid_argument("prefix length must be positive");
  const auto group = enumerate_E(1);
  std::vector<SmallElement> small;
  for (const auto& g : group) small.push_back(convert<checked_int64>(g.element()));
  std::vector<DefectRow> rows(suite.points.size());
  parallel_chunks(static_cast<std::int64_t>(rows.size()), 16, jobs, [&](std::int64_t b, std::int64_t e, std::int64_t) {
    WitnessEngine engine(family, n);
    for (std::int64_t i = b; i < e; ++i) {
      const auto& y = suite.points[static_cast<std::size_t>(i)];
      DefectRow row;
      try {
        auto r = engine.pair_max(convert<checked_int64>(y), small, 2);
        row.group_part = r.group_part;
        row.shift_part = r.shift_part;
        row.total = r.total;
        row.argmax_g = r.argmax_g;
        row.argmax_a = {BigInt(r.argmax_a.m.value()), BigInt(r.argmax_a.n.value())};
      } catch (const std::overflow_error&) {
        row = detail::pair_max_wide(y, n, family, group, 2);
      }
      row.suite = suite.name;
      row.index = static_cast<std::size_t>(i);
      row.y = y;
      row.n = n;
      rows[static_cast<std::size_t>(i)] = std::move(row);
    }
  });
  return rows;
}

struct SweepMax {
  std::uint64_t n = 0;
  Rational max{0};
  std::optional<DefectRow> argmax;  // first row attaining the maximum
  std::size_t points = 0;
  std::size_t wide = 0;
};

inline SweepMax sweep_max(const std::vector<Suite>& suites, std::uint64_t n, WalkVariant family, unsigned jobs = 1) {
  SweepMax out;
  out.n = n;
  for (const auto& s : suites) {
    for (auto& row : sweep_suite(s, n, family, jobs)) {
      ++out.points;
      if (row.wide) ++out.wide;
      if (!out.argmax || row.total > out.max) {
        out.max = row.total;
        out.argmax = std::move(row);
      }
    }
  }
  return out;
}

/// The decay test shared by the candidate and the control family: maxima
/// non-increasing in n and the last at most half of the one at `anchor`.
struct DecayVerdict {
  bool non_increasing = true;
  bool halved = false;
  [[nodiscard]] bool decays() const { return non_increasing && halved; }
};

inline DecayVerdict decay_verdict(const std::vector<SweepMax>& maxima, std::uint64_t anchor) {
  DecayVerdict v;
  if (maxima.empty()) return v;
  for (std::size_t i = 1; i < maxima.size(); ++i)
    if (maxima[i].max > maxima[i - 1].max) v.non_increasing = false;
  for (const auto& m : maxima)
    if (m.n == anchor) v.halved = 2 * maxima.back().max <= m.max;
  return v;
}

}  // namespace corona
