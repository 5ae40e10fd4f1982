#pragma once

// The boundary map phi(m, n) = [m:n], its equivariance, and the exact bound
// on how far phi moves under a bounded translation of its argument.

#include "corona/integer.hpp"
#include "corona/modular_group.hpp"
#include "corona/parallel.hpp"
#include "corona/projective_line.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace corona {

template <class Int>
basic_projective_point<Int> phi(const basic_lattice_vector<Int>& v) {
  if (v.is_zero()) throw std::domain_error("phi undefined at 0");
  return basic_projective_point<Int>::normalize(v.m, v.n);
}

template <class Int>
bool equivariance_check(const basic_group_element<Int>& g, const basic_lattice_vector<Int>& v) {
  return act_boundary(g, phi(v)) == phi(act_lattice(g, v));
}

/// chordal_sq(phi(v + a), phi(v)). Throws std::domain_error if v or v + a is 0.
template <class Int>
Rational higson_deviation_sq(const basic_lattice_vector<Int>& v, const basic_lattice_vector<Int>& a) {
  return chordal_sq(phi(v + a), phi(v));
}

/// Exact check of higson_deviation_sq(v, a) <= |a|^2 / |v + a|^2, in the
/// equivalent form cross(a, v)^2 <= |a|^2 |v|^2.
template <class Int>
bool higson_bound_holds(const basic_lattice_vector<Int>& v, const basic_lattice_vector<Int>& a) {
  if (v.is_zero() || (v + a).is_zero()) throw std::domain_error("phi undefined at 0");
  Int cross = a.m * v.n - a.n * v.m;
  return cross * cross <= (a.m * a.m + a.n * a.n) * (v.m * v.m + v.n * v.n);
}

struct AnnulusMax {
  std::int64_t radius = 0;
  Rational max_dev_sq{0};
  std::optional<LatticeVector> argmax;  // lexicographically least maximizer
};

namespace detail {

struct ScanBest {
  std::int64_t num = 0;  // cross^2
  __int128 den = 1;      // |v|^2 |v + a|^2
  std::int64_t m = 0, n = 0;
  bool found = false;

  void offer(std::int64_t cn, __int128 cd, std::int64_t vm, std::int64_t vn) {
    if (!found) {
      *this = {cn, cd, vm, vn, true};
      return;
    }
    __int128 lhs = static_cast<__int128>(cn) * den;
    __int128 rhs = static_cast<__int128>(num) * cd;
    if (lhs > rhs || (lhs == rhs && (vm < m || (vm == m && vn < n)))) *this = {cn, cd, vm, vn, true};
  }

  static ScanBest fold(ScanBest x, const ScanBest& y) {
    if (y.found) x.offer(y.num, y.den, y.m, y.n);
    return x;
  }
};

}  // namespace detail

/// For each R, the exact maximum of higson_deviation_sq(v, a) over the
/// annulus R <= |v|_inf < 2R (points with v + a = 0 skipped).
inline std::vector<AnnulusMax> higson_scan(const LatticeVector& a, const std::vector<std::int64_t>& radii,
                                           unsigned jobs = 1) {
  constexpr std::int64_t limit = std::int64_t(1) << 22;
  const std::int64_t a1 = from_big<long long>(a.m), a2 = from_big<long long>(a.n);
  if (a1 > limit || a1 < -limit || a2 > limit || a2 < -limit) throw std::invalid_argument("shift too large for scan");
  std::vector<AnnulusMax> out;
  std::int64_t previous = 0;
  for (std::int64_t R : radii) {
    if (R <= previous) throw std::invalid_argument("radii must be positive and increasing");
    if (R > limit) throw std::invalid_argument("radius too large for scan");
    previous = R;
    const std::int64_t outer = 2 * R - 1;
    const std::int64_t rows = 2 * outer + 1;
    auto best = detail::ScanBest::fold(
        {}, parallel_reduce(
                rows, 64, jobs, detail::ScanBest{},
                [&](std::int64_t b, std::int64_t e) {
                  detail::ScanBest local;
                  for (std::int64_t row = b; row < e; ++row) {
                    const std::int64_t m = row - outer;
                    const bool wide = m <= -R || m >= R;
                    for (std::int64_t n = -outer; n <= outer; ++n) {
                      if (!wide && n > -R && n < R) n = R;
                      const std::int64_t wm = m + a1, wn = n + a2;
                      if (wm == 0 && wn == 0) continue;
                      const std::int64_t cross = a1 * n - a2 * m;
                      const __int128 den = static_cast<__int128>(m * m + n * n) * (wm * wm + wn * wn);
                      local.offer(cross * cross, den, m, n);
                    }
                  }
                  return local;
                },
                detail::ScanBest::fold));
    AnnulusMax r;
    r.radius = R;
    if (best.found) {
      BigInt den = BigInt(static_cast<long long>(best.den >> 62)) * (BigInt(1) << 62) +
                   BigInt(static_cast<long long>(best.den & ((static_cast<__int128>(1) << 62) - 1)));
      r.max_dev_sq = Rational(BigInt(best.num), den);
      r.argmax = LatticeVector{BigInt(best.m), BigInt(best.n)};
    }
    out.push_back(r);
  }
  return out;
}

struct HigsonBoundReport {
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  std::optional<LatticeVector> first_violation;
};

/// Checks higson_bound_holds(x, a) for every 0 < |x|_inf <= box with x + a != 0.
inline HigsonBoundReport higson_bound_scan(const LatticeVector& a, std::int64_t box, unsigned jobs = 1) {
  constexpr std::int64_t limit = std::int64_t(1) << 22;
  const std::int64_t a1 = from_big<long long>(a.m), a2 = from_big<long long>(a.n);
  if (box > limit || a1 > limit || a1 < -limit || a2 > limit || a2 < -limit)
    throw std::invalid_argument("box too large for scan");
  const __int128 a_sq = static_cast<__int128>(a1 * a1 + a2 * a2);
  struct Part {
    std::int64_t checked = 0, violations = 0;
    std::optional<std::pair<std::int64_t, std::int64_t>> first;
  };
  auto total = parallel_reduce(
      2 * box + 1, 64, jobs, Part{},
      [&](std::int64_t b, std::int64_t e) {
        Part p;
        for (std::int64_t row = b; row < e; ++row) {
          const std::int64_t m = row - box;
          for (std::int64_t n = -box; n <= box; ++n) {
            if (m == 0 && n == 0) continue;
            if (m + a1 == 0 && n + a2 == 0) continue;
            ++p.checked;
            const __int128 cross = a1 * n - a2 * m;
            if (cross * cross > a_sq * static_cast<__int128>(m * m + n * n)) {
              if (p.violations++ == 0) p.first = {m, n};
            }
          }
        }
        return p;
      },
      [](Part x, const Part& y) {
        if (!x.first && y.first) x.first = y.first;
        x.checked += y.checked;
        x.violations += y.violations;
        return x;
      });
  HigsonBoundReport r;
  r.checked = total.checked;
  r.violations = total.violations;
  if (total.first) r.first_violation = LatticeVector{BigInt(total.first->first), BigInt(total.first->second)};
  return r;
}

}  // namespace corona
