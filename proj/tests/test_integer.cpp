#include "corona/integer.hpp"

#include <catch_amalgamated.hpp>

#include <limits>

using namespace corona;

TEST_CASE("checked_int64 arithmetic is exact or throws") {
  checked_int64 big = std::numeric_limits<std::int64_t>::max();
  CHECK((checked_int64(7) * checked_int64(-6)).value() == -42);
  CHECK((checked_int64(7) / checked_int64(-2)).value() == -3);
  CHECK((checked_int64(7) % checked_int64(-2)).value() == 1);
  CHECK_THROWS_AS(big + checked_int64(1), std::overflow_error);
  CHECK_THROWS_AS(big * checked_int64(2), std::overflow_error);
  CHECK_THROWS_AS(-checked_int64(std::numeric_limits<std::int64_t>::min()), std::overflow_error);
  CHECK_THROWS_AS(checked_int64(1) / checked_int64(0), std::domain_error);
}

TEST_CASE("gcd and sign agree across backends") {
  for (int a = -30; a <= 30; ++a) {
    for (int b = -30; b <= 30; ++b) {
      CHECK(gcd_of(checked_int64(a), checked_int64(b)).value() == gcd_of(BigInt(a), BigInt(b)).convert_to<int>());
    }
    CHECK(sign_of(checked_int64(a)) == sign_of(BigInt(a)));
  }
}

TEST_CASE("conversion from BigInt is range checked") {
  CHECK(from_big<checked_int64>(BigInt(-5)).value() == -5);
  BigInt huge = BigInt(1) << 70;
  CHECK_THROWS_AS(from_big<checked_int64>(huge), std::overflow_error);
}

TEST_CASE("rationals print as p/q and parse back") {
  CHECK(rational_text(Rational(1)) == "1/1");
  CHECK(rational_text(Rational(0)) == "0/1");
  CHECK(rational_text(Rational(-6, 8)) == "-3/4");
  CHECK(parse_rational("7/4") == Rational(7, 4));
  CHECK(parse_rational("3") == Rational(3));
  CHECK_THROWS_AS(parse_rational("x/2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}
