#include "corona/modular_group.hpp"
#include "corona/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace corona;

namespace {
using G = GroupElement;
const G I = G::identity();
const G S = G::S();
const G T = G::T();
const G minus_I = I.negated();

G m(long a, long b, long c, long d) { return G(BigInt(a), BigInt(b), BigInt(c), BigInt(d)); }
LatticeVector v(long a, long b) { return {BigInt(a), BigInt(b)}; }
ProjectivePoint p(long a, long b) { return ProjectivePoint::normalize(BigInt(a), BigInt(b)); }
}  // namespace

TEST_CASE("construction enforces determinant one") {
  CHECK_NOTHROW(m(2, 1, 1, 1));
  CHECK_THROWS_AS(m(2, 0, 0, 1), std::invalid_argument);
}

TEST_CASE("group law on generators") {
  CHECK(S * S == minus_I);
  CHECK(T * invert(T) == I);
  G st = S * T;
  CHECK(st * st * st == minus_I);
  CHECK(power(st, 6) == I);
  CHECK(power(st, -3) == minus_I);
  CHECK(PslClass(S * S) == PslClass::identity());
  CHECK(PslClass(S) == PslClass(invert(S)));
}

TEST_CASE("inverse is the adjugate") {
  CHECK(invert(T) == m(1, -1, 0, 1));
  CHECK(invert(S) == m(0, 1, -1, 0));
  CHECK(invert(m(2, 1, 1, 1)) == m(1, -1, -1, 2));
}

TEST_CASE("actions on the lattice and the boundary") {
  CHECK(act_lattice(T, v(2, 3)) == v(5, 3));
  CHECK(act_lattice(S, v(2, 3)) == v(-3, 2));
  CHECK(act_lattice(m(2, 1, 1, 1), v(1, 1)) == v(3, 2));
  CHECK(act_boundary(T, ProjectivePoint::infinity()) == ProjectivePoint::infinity());
  CHECK(act_boundary(S, ProjectivePoint::infinity()) == ProjectivePoint::zero());
  CHECK(act_boundary(m(1, 1, 1, 2), p(1, 1)) == p(2, 3));
}

TEST_CASE("canonical form picks the sign of the first nonzero entry") {
  CHECK(m(0, -1, 1, 0).canonical() == m(0, 1, -1, 0));
  CHECK(m(-1, 0, 0, -1).canonical() == I);
  CHECK(m(-2, 1, -1, 0).canonical() == m(2, -1, 1, 0));
  G g = m(3, 5, 1, 2);
  CHECK(PslClass(g) == PslClass(g.negated()));
}

TEST_CASE("text form round trips") {
  G g = m(2, -1, 1, 0);
  CHECK(g.text() == "[[2,-1],[1,0]]");
  CHECK(parse_group_element(g.text()) == g);
  CHECK(parse_group_element(" [ [1, 1] , [0, 1] ] ") == T);
  CHECK_THROWS_AS(parse_group_element("[[1,2],[3,4]]"), std::invalid_argument);
  CHECK_THROWS_AS(parse_group_element("[1,1,0,1]"), std::invalid_argument);
  CHECK(parse_lattice_vector("(3,-4)") == v(3, -4));
}

TEST_CASE("word balls match the breadth-first oracle") {
  WordBalls balls(8);
  auto sizes = oracle::ball_sizes(8);
  for (int r = 0; r <= 8; ++r) CHECK(balls.size(r) == sizes[static_cast<std::size_t>(r)]);
  const std::size_t expected[] = {1, 4, 10, 20, 36, 62, 104, 172, 282};
  for (int r = 0; r <= 8; ++r) CHECK(balls.size(r) == expected[r]);
  for (int r = 1; r <= 8; ++r) CHECK(balls.size(r) > balls.size(r - 1));
  CHECK(balls.length_at(0) == 0);
  CHECK(balls.length_at(3) == 1);
  CHECK(balls.length_at(4) == 2);
}

TEST_CASE("word_ball(1) is {1, S, T, T^-1}") {
  auto b = word_ball(1);
  std::set<PslClass> expected{PslClass(I), PslClass(S), PslClass(T), PslClass(G::T_inv())};
  CHECK(std::set<PslClass>(b.begin(), b.end()) == expected);
  CHECK(word_ball(0) == std::vector<PslClass>{PslClass::identity()});
}

TEST_CASE("balls are nested and closed under inverses") {
  WordBalls balls(6);
  for (int r = 0; r < 6; ++r) {
    auto small = balls.ball(r);
    auto big = balls.ball(r + 1);
    std::set<PslClass> bigset(big.begin(), big.end());
    std::set<PslClass> smallset(small.begin(), small.end());
    for (const auto& g : small) {
      CHECK(bigset.count(g) == 1);
      CHECK(smallset.count(invert(g)) == 1);
    }
  }
}

TEST_CASE("associativity and determinant on random triples from the ball of radius 6") {
  auto ball = WordBalls(6).ball(6);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    const G& x = ball[pick(rng)].element();
    const G& y = ball[pick(rng)].element();
    const G& z = ball[pick(rng)].element();
    CHECK((x * y) * z == x * (y * z));
    CHECK((x * y * z).determinant() == 1);
  }
}

TEST_CASE("checked backend agrees with the big integer backend") {
  auto ball = WordBalls(5).ball(5);
  for (const auto& g : ball) {
    auto small = convert<checked_int64>(g.element());
    CHECK(convert<BigInt>(small * small) == g.element() * g.element());
    CHECK(basic_psl_class<checked_int64>(small).element() == convert<checked_int64>(g.element()));
  }
}
