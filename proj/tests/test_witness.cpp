#include "corona/witness.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace corona;

namespace {
using G = GroupElement;
LatticeVector v(long a, long b) { return {BigInt(a), BigInt(b)}; }
ProjectivePoint p(long a, long b) { return ProjectivePoint::normalize(BigInt(a), BigInt(b)); }
PslClass cls(const G& g) { return PslClass(g); }
const auto naive = WalkVariant::naive;
const auto tails = WalkVariant::tails;
const auto sym = WalkVariant::symmetrized;
}  // namespace

TEST_CASE("first measure of every family") {
  for (auto t : {ProjectivePoint::infinity(), p(2, 3), p(-7, 5)}) {
    CHECK(mu(t, 1, naive) == GroupMeasure::dirac(PslClass::identity()));
    CHECK(mu(t, 1, tails) == GroupMeasure::dirac(PslClass::identity()));
    CHECK(mu(t, 1, sym) ==
          GroupMeasure::from_weights({{PslClass::identity(), Rational(1, 2)}, {cls(G::S()), Rational(1, 2)}}));
  }
}

TEST_CASE("mu examples") {
  CHECK(mu(ProjectivePoint::infinity(), 2, tails) ==
        GroupMeasure::from_weights({{PslClass::identity(), Rational(1, 2)}, {cls(G::T()), Rational(1, 2)}}));
  auto m = mu(p(2, 3), 10, naive);
  CHECK(m.support_size() == 4);
  for (const auto& [g, c] : m.atoms()) CHECK(m.weight(g) == Rational(1, 4));
  for (std::uint64_t n : {1u, 5u, 17u}) {
    CHECK(mu(p(13, 8), n, tails).mass() == 1);
    CHECK(mu(p(13, 8), n, tails).support_size() <= n);
    CHECK(mu(p(13, 8), n, sym).support_size() <= 2 * n);
    CHECK(mu(p(13, 8), n, sym).mass() == 1);
  }
}

TEST_CASE("boundary defect examples") {
  for (auto family : {naive, tails, sym})
    for (std::uint64_t n : {1u, 4u, 9u}) CHECK(boundary_defect(G::identity(), p(5, 3), n, family) == 0);
  for (std::uint64_t n : {2u, 3u, 8u, 30u}) CHECK(boundary_defect(G::S(), ProjectivePoint::zero(), n, tails) == 2);
  CHECK(boundary_defect(G::T(), p(355, 113), 12, sym) <= 2);
}

TEST_CASE("the symmetrized family is exactly S equivariant") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<long> coord(-5000, 5000);
  for (int i = 0; i < 60; ++i) {
    long a = coord(rng), b = coord(rng);
    if (a == 0 && b == 0) continue;
    for (std::uint64_t n : {1u, 6u, 20u}) CHECK(boundary_defect(G::S(), p(a, b), n, sym) == 0);
  }
  for (std::uint64_t n : {1u, 6u, 20u}) {
    CHECK(boundary_defect(G::S(), ProjectivePoint::zero(), n, sym) == 0);
    CHECK(boundary_defect(G::S(), ProjectivePoint::infinity(), n, sym) == 0);
  }
}

TEST_CASE("T defect of the symmetrized family decays like 1/n") {
  for (auto t : {p(13, 8), p(-7, 10), p(1, 1000), ProjectivePoint::infinity()}) {
    for (std::uint64_t n : {8u, 32u}) {
      CHECK(boundary_defect(G::T(), t, n, sym) <= Rational(3, n));
      CHECK(boundary_defect(G::T_inv(), t, n, sym) <= Rational(3, n));
    }
  }
}

TEST_CASE("zeta_n examples") {
  CHECK(zeta_n(v(5, 0), 6, tails) == mu(ProjectivePoint::infinity(), 6, tails));
  for (auto family : {naive, tails}) CHECK(zeta_n(v(2, 3), 1, family) == GroupMeasure());
  for (long k : {1, 2, 7, 1000}) CHECK(zeta_n(v(k, k), 9, sym) == zeta_n(v(1, 1), 9, sym));
  CHECK_THROWS_AS(zeta_n(v(0, 0), 3, sym), std::domain_error);
}

TEST_CASE("pair defect examples") {
  for (auto family : {naive, tails, sym})
    CHECK(pair_defect(G::identity(), v(0, 0), v(0, 0), v(17, 5), 8, family) == 0);
  auto y = v(1000000, 0);
  CHECK(pair_defect(G::identity(), v(0, 1), v(0, 0), y, 8, naive) == Rational(7, 4));
  CHECK(pair_defect(G::identity(), v(0, 1), v(0, 0), y, 8, sym) <= Rational(1, 2));
  CHECK_THROWS_AS(pair_defect(G::identity(), v(1, 0), v(0, 0), v(-1, 0), 4, sym), std::domain_error);
  CHECK_THROWS_AS(pair_defect(G::identity(), v(1, 0), v(0, 0), v(0, 0), 4, sym), std::domain_error);
}

TEST_CASE("pair defect is homogeneous in y") {
  for (auto family : {naive, tails, sym})
    for (const auto& g : word_ball(1))
      for (long k : {2, 3, 11}) {
        CHECK(pair_defect(g.element(), v(0, 0), v(0, 0), v(7 * k, 3 * k), 10, family) ==
              pair_defect(g.element(), v(0, 0), v(0, 0), v(7, 3), 10, family));
      }
}

TEST_CASE("engine agrees with the exact functions") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> coord(-3000, 3000);
  std::vector<SmallElement> e1;
  for (const auto& g : WordBalls(1).ball(1)) e1.push_back(convert<checked_int64>(g.element()));
  for (auto family : {naive, tails, sym}) {
    for (std::uint64_t n : {3u, 10u}) {
      WitnessEngine engine(family, n);
      for (int i = 0; i < 25; ++i) {
        long a = coord(rng), b = coord(rng);
        if (a == 0 && b == 0) continue;
        auto y = v(a, b);
        auto ys = convert<checked_int64>(y);
        auto r = engine.pair_max(ys, e1, 2);
        Rational group_part = 0, shift_part = 0;
        for (const auto& g : e1) {
          auto gb = convert<BigInt>(g);
          group_part = std::max(group_part, pair_defect(gb, v(0, 0), v(0, 0), y, n, family));
          CHECK(engine.boundary_defect(g, phi(ys)) == boundary_defect(gb, phi(y), n, family));
        }
        for (long s1 = -2; s1 <= 2; ++s1)
          for (long s2 = -2; s2 <= 2; ++s2) {
            if (a + s1 == 0 && b + s2 == 0) continue;
            shift_part = std::max(shift_part, pair_defect(G::identity(), v(s1, s2), v(0, 0), y, n, family));
          }
        CHECK(r.group_part == group_part);
        CHECK(r.shift_part == shift_part);
        CHECK(r.total == group_part + shift_part);
      }
    }
  }
}
