#include "corona/group_measure.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace corona;

namespace {
using G = GroupElement;
PslClass cls(const G& g) { return PslClass(g); }
const PslClass one = PslClass::identity();
const PslClass s = cls(G::S());
const PslClass t = cls(G::T());

GroupMeasure half_one_half_s() { return GroupMeasure::from_weights({{one, Rational(1, 2)}, {s, Rational(1, 2)}}); }

GroupMeasure random_measure(std::mt19937_64& rng, const std::vector<PslClass>& pool) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> count(1, 5);
  std::vector<GroupMeasure::atom> atoms;
  int k = count(rng);
  for (int i = 0; i < k; ++i) atoms.emplace_back(pool[pick(rng)], BigInt(count(rng)));
  return GroupMeasure::from_counts(atoms);
}
}  // namespace

TEST_CASE("dirac measures") {
  auto d = GroupMeasure::dirac(one);
  CHECK(d.support_size() == 1);
  CHECK(d.mass() == 1);
  CHECK(l1_distance(d, d) == 0);
  CHECK(l1_distance(d, GroupMeasure::dirac(s)) == 2);
}

TEST_CASE("translation") {
  auto g = cls(G(BigInt(2), BigInt(1), BigInt(1), BigInt(1)));
  CHECK(translate(g, GroupMeasure::dirac(one)) == GroupMeasure::dirac(g));
  auto mu = half_one_half_s();
  CHECK(translate(G::identity(), mu) == mu);
  auto expected = GroupMeasure::from_weights({{t, Rational(1, 2)}, {cls(G::T() * G::S()), Rational(1, 2)}});
  CHECK(translate(G::T(), mu) == expected);
}

TEST_CASE("l1 distance examples") {
  std::vector<PslClass> g;
  for (int k = 1; k <= 5; ++k) g.push_back(cls(power(G::T(), k)));
  auto a = GroupMeasure::uniform({g[0], g[1], g[2], g[3]});
  auto b = GroupMeasure::uniform({g[1], g[2], g[3], g[4]});
  CHECK(l1_distance(a, b) == Rational(1, 2));
  CHECK(l1_distance(half_one_half_s(), GroupMeasure::dirac(one)) == 1);
}

TEST_CASE("uniform collapses multiplicities") {
  auto mu = GroupMeasure::uniform({one, t, one});
  CHECK(mu.support_size() == 2);
  CHECK(mu.weight(one) == Rational(2, 3));
  CHECK(mu.weight(t) == Rational(1, 3));
  CHECK(mu.weight(s) == 0);
}

TEST_CASE("from_weights validates its input") {
  CHECK_THROWS_AS(GroupMeasure::from_weights({{one, Rational(1, 2)}}), std::invalid_argument);
  CHECK_THROWS_AS(GroupMeasure::from_weights({{one, Rational(3, 2)}, {s, Rational(-1, 2)}}), std::invalid_argument);
  auto mu = GroupMeasure::from_weights({{one, Rational(1)}, {s, Rational(0)}});
  CHECK(mu.support_size() == 1);
}

TEST_CASE("average") {
  auto mu = half_one_half_s();
  CHECK(average(std::vector{mu}) == mu);
  CHECK(average(std::vector{GroupMeasure::dirac(one), GroupMeasure::dirac(s)}) == mu);
  CHECK(average(std::vector{mu, mu, mu}) == mu);
  CHECK_THROWS_AS(average(std::vector<GroupMeasure>{}), std::invalid_argument);
}

TEST_CASE("report entries are sorted p/q pairs") {
  auto e = half_one_half_s().entries();
  REQUIRE(e.size() == 2);
  CHECK(e[0].first == "[[0,1],[-1,0]]");
  CHECK(e[0].second == "1/2");
  CHECK(e[1].first == "[[1,0],[0,1]]");
}

TEST_CASE("measure properties on random instances") {
  auto pool = WordBalls(4).ball(4);
  auto group = WordBalls(6).ball(6);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
  for (int i = 0; i < 500; ++i) {
    auto mu = random_measure(rng, pool);
    auto nu = random_measure(rng, pool);
    const auto& g = group[pick(rng)].element();
    auto gmu = translate(g, mu), gnu = translate(g, nu);
    CHECK(mu.mass() == 1);
    CHECK(gmu.mass() == 1);
    CHECK(l1_distance(gmu, gnu) == l1_distance(mu, nu));
    CHECK(l1_distance(mu, nu) <= 2);
    CHECK(l1_distance(mu, nu) == l1_distance(nu, mu));

    std::vector<GroupMeasure> as, bs;
    Rational worst = 0;
    for (int k = 0; k < 3; ++k) {
      as.push_back(random_measure(rng, pool));
      bs.push_back(random_measure(rng, pool));
      worst = std::max(worst, l1_distance(as.back(), bs.back()));
    }
    CHECK(average(as).mass() == 1);
    CHECK(l1_distance(average(as), average(bs)) <= worst);
  }
}

TEST_CASE("checked counts give the same distances") {
  using SmallMeasure = basic_group_measure<checked_int64, checked_int64>;
  using C = basic_psl_class<checked_int64>;
  using E = basic_group_element<checked_int64>;
  auto a = SmallMeasure::uniform({C(E::T()), C(E::S()), C()});
  auto b = SmallMeasure::uniform({C(E::T()), C(E::T_inv())});
  CHECK(l1_distance(a, b) == Rational(4, 3));
}
