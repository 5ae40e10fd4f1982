#pragma once

// Named sample suites of lattice points used by the defect sweeps.
//
//   axis        (N, 0) and (N, 1) for N = 10^2 .. 10^6
//   ray         k (1, 1) for k = 1 .. 10^4
//   generic     200 random primitive vectors with |y|_inf <= 10^6
//   cf-bounded  200 points p/q whose continued fractions have 30 digits in {1, 2}
//
// The pseudo-random suites use mt19937_64 with explicit integer mappings so
// they are identical on every platform for a given seed.

#include "corona/integer.hpp"
#include "corona/modular_group.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace corona {

struct Suite {
  std::string name;
  std::vector<LatticeVector> points;
};

namespace detail {

// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

}  // namespace detail

inline Suite axis_suite() {
  Suite s{"axis", {}};
  for (long long n : {0LL, 1LL}) {
    long long N = 100;
    for (int k = 2; k <= 6; ++k, N *= 10) s.points.push_back({BigInt(N), BigInt(n)});
  }
  return s;
}

inline Suite ray_suite(long long count = 10000) {
  Suite s{"ray", {}};
  for (long long k = 1; k <= count; ++k) s.points.push_back({BigInt(k), BigInt(k)});
  return s;
}

inline Suite generic_suite(std::uint64_t seed, std::size_t count = 200, std::int64_t bound = 1000000) {
  Suite s{"generic", {}};
  std::mt19937_64 rng(seed);
  const auto width = static_cast<std::uint64_t>(2 * bound + 1);
  while (s.points.size() < count) {
    auto m = static_cast<std::int64_t>(detail::uniform_below(rng, width)) - bound;
    auto n = static_cast<std::int64_t>(detail::uniform_below(rng, width)) - bound;
    if (std::gcd(m, n) != 1) continue;
    s.points.push_back({BigInt(m), BigInt(n)});
  }
  return s;
}

/// p/q = [a0; a1, ..., a_{depth-1}] with every digit drawn from {1, 2}, and a
/// random sign.
inline Suite cf_bounded_suite(std::uint64_t seed, std::size_t count = 200, int depth = 30) {
  Suite s{"cf-bounded", {}};
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<int> digits;
    for (int k = 0; k < depth; ++k) digits.push_back(1 + static_cast<int>(detail::uniform_below(rng, 2)));
    bool negative = detail::uniform_below(rng, 2) == 1;
    BigInt p(1), q(0);  // value of the tail, as p/q, built from the last digit
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
      BigInt np = BigInt(*it) * p + q;
      q = p;
      p = np;
    }
    s.points.push_back({negative ? BigInt(-p) : p, q});
  }
  return s;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"axis", "ray", "generic", "cf-bounded"};
  return names;
}

inline Suite sample_suite(const std::string& name, std::uint64_t seed = 0) {
  if (name == "axis") return axis_suite();
  if (name == "ray") return ray_suite();
  if (name == "generic") return generic_suite(seed);
  if (name == "cf-bounded") return cf_bounded_suite(seed);
  throw std::invalid_argument("unknown suite '" + name + "' (expected axis, ray, generic or cf-bounded)");
}

}  // namespace corona
