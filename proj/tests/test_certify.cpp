#include "corona/certify.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace corona;

namespace {
LatticeVector v(long long a, long long b) { return {BigInt(a), BigInt(b)}; }

Rational direct_max(const LatticeVector& y, std::uint64_t n, WalkVariant family) {
  Rational group = 0, shift = 0;
  for (const auto& g : enumerate_E(1)) {
    group = std::max(group, pair_defect(g.element(), v(0, 0), v(0, 0), y, n, family));
  }
  for (const auto& x : enumerate_F(1))
    for (const auto& x1 : enumerate_F(1)) {
      if ((x + y + x1).is_zero()) continue;
      shift = std::max(shift, pair_defect(GroupElement::identity(), x, x1, y, n, family));
    }
  return group + shift;
}
}  // namespace

TEST_CASE("golden power comparison is exact") {
  const long double golden = (1.0L + std::sqrt(5.0L)) / 2.0L;
  for (std::int64_t k = 0; k <= 40; ++k) {
    const long double p = std::pow(golden, static_cast<long double>(k));
    for (std::int64_t h = 1; h <= 200000; h += (h < 1000 ? 1 : 997)) {
      if (std::fabs(p - static_cast<long double>(h)) < 1e-6L * p) continue;
      INFO("k=" << k << " h=" << h);
      CHECK(detail::golden_power_reaches(k, h) == (p >= static_cast<long double>(h)));
    }
  }
  CHECK(detail::golden_power_reaches(0, 1));
  CHECK_FALSE(detail::golden_power_reaches(1, 2));  // phi < 2
  CHECK(detail::golden_power_reaches(2, 2));        // phi^2 = 2.618...
}

TEST_CASE("csv quoting") {
  CHECK(csv_field("7") == "7");
  CHECK(csv_field("[[1,0],[0,1]]") == "\"[[1,0],[0,1]]\"");
  CHECK(csv_field("a\"b,c") == "\"a\"\"b,c\"");
  std::ostringstream out;
  csv_row(out, {"x", "(1,2)", ""});
  CHECK(out.str() == "x,\"(1,2)\",\n");
}

TEST_CASE("decay verdict") {
  auto make = [](std::vector<Rational> values) {
    std::vector<SweepMax> out;
    std::uint64_t n = 4;
    for (auto& x : values) {
      SweepMax m;
      m.n = n;
      m.max = x;
      out.push_back(m);
      n *= 2;
    }
    return out;
  };
  CHECK(decay_verdict(make({1, Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)}), 8).decays());
  auto flat = decay_verdict(make({2, 2, 2, 2, 2}), 8);
  CHECK(flat.non_increasing);
  CHECK_FALSE(flat.halved);
  auto rising = decay_verdict(make({Rational(7, 2), Rational(15, 4), 4, 4, 4}), 8);
  CHECK_FALSE(rising.non_increasing);
  CHECK_FALSE(rising.decays());
}

TEST_CASE("suite sweeps agree with the exact pair defect") {
  Suite s{"mixed", {v(1, 1), v(100, 0), v(-7, 12), v(355, 113), v(0, 5), v(1000, 999)}};
  for (auto family : {WalkVariant::naive, WalkVariant::symmetrized})
    for (std::uint64_t n : {1u, 4u, 9u}) {
      auto rows = sweep_suite(s, n, family, 2);
      REQUIRE(rows.size() == s.points.size());
      for (const auto& row : rows) {
        INFO(variant_name(family) << " n=" << n << " y=" << vector_text(row.y));
        CHECK(row.total == direct_max(row.y, n, family));
        CHECK(row.total == row.group_part + row.shift_part);
        auto wide = detail::pair_max_wide(row.y, n, family, enumerate_E(1), 2);
        CHECK(wide.group_part == row.group_part);
        CHECK(wide.shift_part == row.shift_part);
      }
    }
}

TEST_CASE("sweeps fall back to big integers") {
  // consecutive Fibonacci numbers near the top of the 64-bit range
  BigInt a = 1, b = 1;
  while (a + b < BigInt("9000000000000000000")) {
    BigInt c = a + b;
    a = b;
    b = c;
  }
  Suite s{"huge", {LatticeVector{b, a}, LatticeVector{-b, a}, LatticeVector{BigInt("9000000000000000000"), BigInt(1)}}};
  auto rows = sweep_suite(s, 6, WalkVariant::symmetrized, 1);
  bool any_wide = false;
  for (const auto& row : rows) {
    any_wide = any_wide || row.wide;
    CHECK(row.total == direct_max(row.y, 6, WalkVariant::symmetrized));
  }
  CHECK(any_wide);
}

TEST_CASE("quick certify passes and its summary is deterministic") {
  CertifyOptions o;
  o.quick = true;
  auto report = certify(o);
  REQUIRE(report.criteria.size() == 11);
  for (const auto& c : report.criteria) {
    INFO(c.id << " " << c.title << ": " << c.summary);
    if (c.id == 8 || c.id == 10)
      CHECK_FALSE(c.ran);
    else
      CHECK(c.pass);
  }
  CHECK(report.all_ok());
  auto doc = summary_json(report);
  CHECK(doc["schema"] == "corona-witness/1");
  CHECK(doc["mode"] == "quick");
  const std::string text = doc.dump();
  CHECK(text.find("seconds") == std::string::npos);
  CHECK(text.find("jobs\":1") == std::string::npos);
  std::ostringstream lines;
  print_verdicts(lines, report);
  CHECK(lines.str().find("[7] PASS  negative control") != std::string::npos);
  CHECK(lines.str().find("non-decaying") != std::string::npos);
}

TEST_CASE("baselines with another schema are ignored") {
  const std::string path = "baseline_schema_test.json";
  {
    std::ofstream f(path);
    f << R"({"schema": "other/2", "decay": {"max": {"4": "0/1"}}})";
  }
  CHECK(detail::read_baseline(path).is_null());
  {
    std::ofstream f(path);
    f << R"({"schema": "corona-witness/1", "decay": {"seed": 0, "max": {"4": "2/1"}}})";
  }
  auto j = detail::read_baseline(path);
  REQUIRE_FALSE(j.is_null());
  CHECK(j["decay"]["max"]["4"] == "2/1");
  CHECK(detail::read_baseline("no/such/file.json").is_null());
  std::remove(path.c_str());
}
