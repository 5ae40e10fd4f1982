#pragma once

// Independent reference computations used to cross-check the library.
// They share no code with the main implementation: plain 64-bit arrays,
// different traversal orders and textbook algorithms.

#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace corona::oracle {

using Mat = std::array<std::int64_t, 4>;

inline Mat mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

inline Mat psl_key(Mat x) {
  for (auto v : x) {
    if (v == 0) continue;
    if (v < 0)
      for (auto& e : x) e = -e;
    break;
  }
  return x;
}

/// Sizes of the balls of radius 0..r in PSL(2,Z) for {S, T, T^-1},
/// growing each sphere by left multiplication.
inline std::vector<std::size_t> ball_sizes(int r) {
  const Mat gens[] = {{0, -1, 1, 0}, {1, 1, 0, 1}, {1, -1, 0, 1}};
  std::set<Mat> seen{{1, 0, 0, 1}};
  std::vector<Mat> sphere{{1, 0, 0, 1}};
  std::vector<std::size_t> sizes{1};
  for (int k = 1; k <= r; ++k) {
    std::vector<Mat> next;
    for (const auto& x : sphere)
      for (const auto& s : gens) {
        Mat y = psl_key(mul(s, x));
        if (seen.insert(y).second) next.push_back(y);
      }
    sphere = std::move(next);
    sizes.push_back(seen.size());
  }
  return sizes;
}

using Frac = std::pair<std::int64_t, std::int64_t>;  // (p, q) with q >= 0, reduced

/// Mediant vertices of the Stern-Brocot search for p/q (q > 0, p != 0),
/// comparing fractions by cross multiplication. Negative targets search the
/// arc from -1/0 to 0/1.
inline std::vector<Frac> stern_brocot_path(std::int64_t p, std::int64_t q) {
  if (q <= 0 || p == 0 || std::gcd(p, q) != 1) throw std::invalid_argument("oracle expects a reduced nonzero p/q");
  Frac lo = p > 0 ? Frac{0, 1} : Frac{-1, 0};
  Frac hi = p > 0 ? Frac{1, 0} : Frac{0, 1};
  std::vector<Frac> path;
  for (;;) {
    Frac mid{lo.first + hi.first, lo.second + hi.second};
    path.push_back(mid);
    // sign of p/q - mid
    std::int64_t s = p * mid.second - q * mid.first;
    if (s == 0) return path;
    if (s < 0)
      hi = mid;
    else
      lo = mid;
  }
}

/// Sum of the continued fraction digits of |q/p| if p < 0, of p/q otherwise.
inline std::int64_t partial_quotient_sum(std::int64_t p, std::int64_t q) {
  std::int64_t x = p > 0 ? p : q;
  std::int64_t y = p > 0 ? q : -p;
  std::int64_t sum = 0;
  while (y != 0) {
    sum += x / y;
    std::int64_t r = x % y;
    x = y;
    y = r;
  }
  return sum;
}

}  // namespace corona::oracle
