#include "corona/signature_engine.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace corona;

namespace {
const auto naive = WalkVariant::naive;
const auto tails = WalkVariant::tails;
const auto sym = WalkVariant::symmetrized;

std::vector<SmallElement> ball_elements(int r) {
  std::vector<SmallElement> out;
  for (const auto& g : WordBalls(r).ball(r)) out.push_back(convert<checked_int64>(g.element()));
  return out;
}

std::vector<std::pair<long, long>> sample_points(std::uint64_t seed, int count, long bound) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coord(-bound, bound);
  std::vector<std::pair<long, long>> out{{1, 0}, {0, 1}, {5, 0}, {0, -7}, {3, 3}, {-4, 4}, {13, 8}, {-21, 13},
                                         {1000, 1}, {1, 1000}, {999, -1000}};
  while (static_cast<int>(out.size()) < count) {
    long a = coord(rng), b = coord(rng);
    if (a != 0 || b != 0) out.push_back({a, b});
  }
  return out;
}
}  // namespace

TEST_CASE("equal signatures give equal measures") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coord(-400, 400);
  for (auto family : {naive, tails, sym}) {
    for (std::uint64_t s : {1u, 2u, 5u, 12u}) {
      SignatureEngine engine(family, s, {});
      std::map<std::vector<std::int64_t>, CompactMeasure> seen;
      std::vector<std::int64_t> code;
      for (int i = 0; i < 400; ++i) {
        long a = coord(rng), b = coord(rng);
        if (a == 0 && b == 0) continue;
        auto t = SmallPoint::normalize(a, b);
        engine.signature(t.m().value(), t.n().value(), code);
        auto m = compact_mu(t, s, family);
        auto [it, fresh] = seen.emplace(code, m);
        if (!fresh) {
          CHECK(it->second.keys == m.keys);
          CHECK(it->second.total == m.total);
        }
      }
    }
  }
}

TEST_CASE("shapes contain their point") {
  SignatureEngine engine(sym, 6, {});
  std::vector<std::int64_t> code;
  for (auto [a, b] : sample_points(3, 300, 5000)) {
    auto t = SmallPoint::normalize(a, b);
    SignatureEngine::Shape shape;
    engine.signature(t.m().value(), t.n().value(), code, &shape);
    if (!shape.interior) {
      CHECK(depth(t) <= 5);
      continue;
    }
    CHECK(shape.u1 * shape.v2 - shape.u2 * shape.v1 == 1);
    const std::int64_t p = t.m().value(), q = t.n().value();
    std::int64_t alpha = p * shape.v2 - q * shape.v1;
    std::int64_t beta = shape.u1 * q - shape.u2 * p;
    if (alpha < 0) alpha = -alpha, beta = -beta;
    CHECK(alpha > 0);
    CHECK(beta > 0);
  }
}

TEST_CASE("pair_max agrees with the cached engine") {
  for (auto family : {naive, tails, sym}) {
    for (std::uint64_t s : {1u, 4u, 16u}) {
      for (int r : {1, 2}) {
        auto group = ball_elements(r);
        SignatureEngine fast(family, s, group, 5000);
        WitnessEngine slow(family, s);
        for (auto [a, b] : sample_points(17 + s + r, 60, 3000)) {
          auto ref = slow.pair_max(SmallVector{a, b}, group, 2 * r);
          auto got = fast.pair_max(a, b, 2 * r);
          INFO(variant_name(family) << " s=" << s << " r=" << r << " y=(" << a << "," << b << ")");
          CHECK(got.group_part.value() == ref.group_part);
          CHECK(got.shift_part.value() == ref.shift_part);
          // repeated calls hit the memo tables
          auto again = fast.pair_max(-a, -b, 2 * r);
          CHECK(again.group_part.value() == ref.group_part);
          CHECK(again.shift_part.value() == ref.shift_part);
        }
      }
    }
  }
}

TEST_CASE("memoized group maxima agree along an arc") {
  auto group = ball_elements(2);
  SignatureEngine fast(sym, 4, group);
  WitnessEngine slow(sym, 4);
  // many points share a few deep arcs
  for (long k = 1; k <= 40; ++k) {
    long a = 1000 + 37 * k, b = 611 + 22 * k;
    auto ref = slow.pair_max(SmallVector{a, b}, group, 4);
    auto got = fast.pair_max(a, b, 4);
    CHECK(got.group_part.value() == ref.group_part);
    CHECK(got.shift_part.value() == ref.shift_part);
  }
}

TEST_CASE("early exit decides membership exactly") {
  auto group = ball_elements(1);
  for (auto family : {naive, sym}) {
    for (std::int64_t level : {1, 2, 3}) {
      std::uint64_t s = 4 * level * level;
      SignatureEngine fast(family, s, group);
      WitnessEngine slow(family, s);
      for (auto [a, b] : sample_points(5 + level, 80, 200)) {
        auto ref = slow.pair_max(SmallVector{a, b}, group, 2);
        CHECK(fast.reaches(a, b, 2, level) == (ref.total >= Rational(1, level)));
      }
    }
  }
}

TEST_CASE("sum_reaches compares exactly") {
  CHECK(sum_reaches({1, 4}, {1, 4}, 2));
  CHECK_FALSE(sum_reaches({1, 4}, {1, 5}, 2));
  CHECK(sum_reaches({0, 1}, {1, 3}, 3));
  CHECK_FALSE(sum_reaches({0, 1}, {0, 1}, 1));
}
