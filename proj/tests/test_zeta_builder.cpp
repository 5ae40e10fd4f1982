#include "corona/zeta_builder.hpp"

#include <catch_amalgamated.hpp>

#include <map>
#include <set>
#include <sstream>

using namespace corona;

namespace {
const auto naive = WalkVariant::naive;
const auto sym = WalkVariant::symmetrized;
LatticeVector v(long a, long b) { return {BigInt(a), BigInt(b)}; }

// Straightforward recursion over the exact functions: forward images, full
// window, no signatures, no symmetry.
std::map<std::pair<long, long>, int> oracle_levels(long M, int n_max, WalkVariant family, Schedule schedule) {
  std::set<std::pair<long, long>> omega{{0, 0}};
  std::map<std::pair<long, long>, int> level;
  auto inside = [&](long a, long b) { return std::max(std::abs(a), std::abs(b)) <= M; };
  for (int n = 1; n <= n_max; ++n) {
    const auto group = enumerate_E(n);
    const long r = 2 * n;
    std::set<std::pair<long, long>> next = omega;
    for (auto [a, b] : omega) {
      for (const auto& g : group) {
        auto z = act_lattice(g.element(), v(a, b));
        long za = from_big<long long>(z.m), zb = from_big<long long>(z.n);
        if (inside(za, zb)) next.insert({za, zb});
      }
      for (long s = -r; s <= r; ++s)
        for (long t = -r; t <= r; ++t)
          if (inside(a + s, b + t)) next.insert({a + s, b + t});
    }
    const auto s = prefix_for_level(n, schedule);
    for (long a = -M; a <= M; ++a)
      for (long b = -M; b <= M; ++b) {
        if ((a == 0 && b == 0) || next.count({a, b})) continue;
        Rational group_part = 0, shift_part = 0;
        for (const auto& g : group)
          group_part = std::max(group_part, boundary_defect(g.element(), phi(v(a, b)), s, family));
        for (long x = -r; x <= r; ++x)
          for (long y = -r; y <= r; ++y) {
            if (a + x == 0 && b + y == 0) continue;
            shift_part = std::max(shift_part, pair_defect(GroupElement::identity(), v(x, y), v(0, 0), v(a, b), s, family));
          }
        if (group_part + shift_part >= Rational(1, n)) next.insert({a, b});
      }
    for (const auto& p : next)
      if (p != std::pair<long, long>{0, 0} && !level.count(p)) level[p] = n;
    omega = std::move(next);
  }
  return level;
}
}  // namespace

TEST_CASE("exhaustions") {
  CHECK(enumerate_E(0).size() == 1);
  CHECK(enumerate_E(0)[0] == PslClass::identity());
  CHECK(enumerate_E(1).size() == 4);
  CHECK(enumerate_F(0).size() == 1);
  CHECK(enumerate_F(0)[0].is_zero());
  CHECK(enumerate_F(1).size() == 9);
  CHECK(enumerate_F(3).size() == 49);
  CHECK_THROWS_AS(enumerate_E(-1), std::invalid_argument);
}

TEST_CASE("prefix schedule") {
  CHECK(prefix_for_level(0, Schedule::quadratic) == 4);
  CHECK(prefix_for_level(1, Schedule::quadratic) == 4);
  CHECK(prefix_for_level(8, Schedule::quadratic) == 256);
  CHECK(prefix_for_level(0, Schedule::linear) == 1);
  CHECK(prefix_for_level(5, Schedule::linear) == 5);
  CHECK(parse_schedule("linear") == Schedule::linear);
  CHECK_THROWS_AS(parse_schedule("cubic"), std::invalid_argument);
}

TEST_CASE("compute_D examples") {
  CHECK(compute_D(3, GroupElement::identity(), v(0, 0), v(0, 0), 15, sym).empty());
  auto d = compute_D(8, GroupElement::identity(), v(0, 1), v(0, 0), 20, naive, Schedule::linear);
  std::set<std::pair<long, long>> in;
  for (const auto& y : d) in.insert({from_big<long long>(y.m), from_big<long long>(y.n)});
  for (long N = 1; N <= 20; ++N) CHECK(in.count({N, 0}) == 1);
  CHECK_THROWS_AS(compute_D(0, GroupElement::identity(), v(0, 0), v(0, 0), 5, sym), std::invalid_argument);
}

TEST_CASE("build_levels matches the direct recursion") {
  for (auto schedule : {Schedule::linear, Schedule::quadratic}) {
    for (auto family : {sym, naive}) {
      const long M = 14;
      const int n_max = 4;
      auto table = build_levels(M, n_max, family, schedule, 2);
      auto ref = oracle_levels(M, n_max, family, schedule);
      for (long a = -M; a <= M; ++a)
        for (long b = -M; b <= M; ++b) {
          if (a == 0 && b == 0) continue;
          auto it = ref.find({a, b});
          INFO(variant_name(family) << ' ' << schedule_name(schedule) << " y=(" << a << "," << b << ")");
          CHECK(table.level(a, b) == (it == ref.end() ? n_max + 1 : it->second));
        }
    }
  }
}

TEST_CASE("build_levels matches the direct recursion where D_n matters") {
  const long M = 30;
  auto table = build_levels(M, 2, sym, Schedule::quadratic, 2);
  auto ref = oracle_levels(M, 2, sym, Schedule::quadratic);
  std::int64_t from_defect = 0;
  for (const auto& st : table.stats()) from_defect += st.from_defect;
  CHECK(from_defect > 100);
  for (long a = -M; a <= M; ++a)
    for (long b = -M; b <= M; ++b) {
      if (a == 0 && b == 0) continue;
      auto it = ref.find({a, b});
      CHECK(table.level(a, b) == (it == ref.end() ? 3 : it->second));
    }
}

TEST_CASE("window errors") {
  CHECK_THROWS_AS(build_levels(1, 3, sym, Schedule::quadratic, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_levels(10, 0, sym, Schedule::quadratic, 0), std::invalid_argument);
}

TEST_CASE("level table structure") {
  auto table = build_levels(48, 4, sym, Schedule::quadratic, 16);
  // every point next to the origin is in Omega_1
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b)
      if (a != 0 || b != 0) CHECK(table.level(a, b) == 1);
  auto hist = table.histogram();
  std::int64_t total = 0;
  for (auto h : hist) total += h;
  CHECK(total == 97 * 97 - 1);
  // Omega_n counts are increasing
  for (std::size_t i = 1; i < table.stats().size(); ++i) CHECK(table.stats()[i].omega >= table.stats()[i - 1].omega);

  auto st = check_structure(table);
  CHECK(st.violations == 0);
  CHECK(st.asymmetric == 0);
  CHECK(st.checks > 0);
  auto ls = check_level_shift(table);
  CHECK(ls.violations == 0);
  CHECK(ls.checks > 0);
}

TEST_CASE("tables are independent of the worker count and round trip") {
  auto one = build_levels(40, 3, sym, Schedule::quadratic, 6, 1);
  auto four = build_levels(40, 3, sym, Schedule::quadratic, 6, 4);
  CHECK(one == four);
  CHECK(one.digest() == four.digest());
  CHECK(one.digest().size() == 16);
  std::stringstream buffer;
  one.write(buffer);
  auto back = LevelTable::read(buffer);
  CHECK(back == one);
  CHECK(back.digest() == one.digest());
  std::stringstream broken("# window 3\n1 1 1\n");
  CHECK_THROWS_AS(LevelTable::read(broken), std::invalid_argument);
}

TEST_CASE("zeta averages the first l members") {
  auto table = build_levels(30, 4, sym, Schedule::quadratic, 8);
  bool saw_one = false, saw_two = false;
  for (long a = -30; a <= 30; a += 3)
    for (long b = -30; b <= 30; b += 7) {
      if (a == 0 && b == 0) continue;
      const int l = table.level(a, b);
      auto z = zeta(v(a, b), table);
      CHECK(z.mass() == 1);
      if (l == 1) {
        saw_one = true;
        CHECK(z == zeta_n(v(a, b), 4, sym));
      }
      if (l == 2) {
        saw_two = true;
        CHECK(z == average(std::vector<GroupMeasure>{zeta_n(v(a, b), 4, sym), zeta_n(v(a, b), 4, sym)}));
      }
      if (l == 3) CHECK(z == average(std::vector<GroupMeasure>{zeta_n(v(a, b), 4, sym), zeta_n(v(a, b), 4, sym),
                                                               zeta_n(v(a, b), 16, sym)}));
    }
  CHECK(saw_one);
  CHECK(saw_two);
  CHECK_THROWS_AS(zeta(v(31, 0), table), std::domain_error);
  CHECK_THROWS_AS(zeta(v(0, 0), table), std::domain_error);
  CHECK(epsilon(GroupElement::identity(), v(0, 0), v(0, 0), v(13, 4), table) == 0);
}

TEST_CASE("level unknown beyond the table") {
  auto table = build_levels(40, 1, sym, Schedule::quadratic, 4);
  bool found = false;
  for (long a = -40; a <= 40 && !found; ++a)
    for (long b = -40; b <= 40 && !found; ++b)
      if (table.level(a, b) == 2) {
        found = true;
        CHECK_THROWS_WITH(zeta(v(a, b), table), Catch::Matchers::ContainsSubstring("level unknown"));
      }
  CHECK(found);
}

TEST_CASE("cohort scan agrees with the exact epsilon") {
  const long M = 22;
  auto table = build_levels(M, 4, sym, Schedule::quadratic, 6);
  auto report = epsilon_cohorts(table, 1, 1);
  const auto e1 = enumerate_E(1);
  REQUIRE(report.group.size() == e1.size());
  std::map<std::pair<long, long>, GroupMeasure> cache;
  auto z = [&](long a, long b) -> const GroupMeasure& {
    auto it = cache.find({a, b});
    if (it == cache.end()) it = cache.emplace(std::make_pair(a, b), zeta(v(a, b), table)).first;
    return it->second;
  };
  const long R = M - table.margin();
  for (const auto& c : report.cohorts) {
    Rational best = -1, low = 100;
    std::vector<Rational> triple(e1.size() * 25, Rational(0));
    std::int64_t count = 0;
    for (long a = -R; a <= R; ++a)
      for (long b = -R; b <= R; ++b) {
        if ((a == 0 && b == 0) || table.level(a, b) != c.level) continue;
        ++count;
        Rational g_best = -1, h_best = -1;
        std::vector<Rational> gv(e1.size(), Rational(-1)), hv(25, Rational(-1));
        for (std::size_t gi = 0; gi < e1.size(); ++gi) {
          auto gy = act_lattice(e1[gi].element(), v(a, b));
          long ga = from_big<long long>(gy.m), gb = from_big<long long>(gy.n);
          if (!table.in_window(ga, gb) || !table.known(ga, gb)) continue;
          gv[gi] = l1_distance(translate(e1[gi].element(), z(a, b)), z(ga, gb));
          g_best = std::max(g_best, gv[gi]);
        }
        for (long s = -2; s <= 2; ++s)
          for (long t = -2; t <= 2; ++t) {
            if (a + s == 0 && b + t == 0) continue;
            auto& h = hv[static_cast<std::size_t>((s + 2) * 5 + (t + 2))];
            h = l1_distance(z(a + s, b + t), z(a, b));
            h_best = std::max(h_best, h);
          }
        for (std::size_t gi = 0; gi < e1.size(); ++gi)
          for (std::size_t ai = 0; ai < 25; ++ai)
            if (gv[gi] >= 0 && hv[ai] >= 0) triple[gi * 25 + ai] = std::max(triple[gi * 25 + ai], gv[gi] + hv[ai]);
        best = std::max(best, g_best + h_best);
        low = std::min(low, g_best + h_best);
      }
    INFO("cohort " << c.level);
    CHECK(c.points == count);
    CHECK(c.max == best);
    CHECK(c.min == low);
    CHECK(c.triple_max == triple);
    CHECK(c.min <= c.median);
    CHECK(c.median <= c.max);
    CHECK(epsilon(e1[0].element(), v(0, 0), v(0, 0), v(c.argmax_m, c.argmax_n), table) >= 0);
  }
  CHECK_FALSE(report.cohorts.empty());
}
