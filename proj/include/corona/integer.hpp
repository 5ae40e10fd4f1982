#pragma once

// Integer and rational arithmetic used throughout the library.
//
// Two integer backends are supported by every template in corona:
//   BigInt        - arbitrary precision (boost cpp_int); the default for the
//                   public aliases.
//   checked_int64 - a 64-bit integer whose arithmetic throws on overflow;
//                   used by the lattice-window scans, where entries are
//                   provably small and speed matters.
// Both are exact: a computation either produces the true integer or throws.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace corona {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>, boost::multiprecision::et_off>;

class checked_int64 {
 public:
  constexpr checked_int64() = default;
  constexpr checked_int64(std::int64_t v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  [[nodiscard]] constexpr std::int64_t value() const { return v_; }

  friend checked_int64 operator+(checked_int64 x, checked_int64 y) {
    std::int64_t r;
    if (__builtin_add_overflow(x.v_, y.v_, &r)) overflow("addition");
    return r;
  }
  friend checked_int64 operator-(checked_int64 x, checked_int64 y) {
    std::int64_t r;
    if (__builtin_sub_overflow(x.v_, y.v_, &r)) overflow("subtraction");
    return r;
  }
  friend checked_int64 operator*(checked_int64 x, checked_int64 y) {
    std::int64_t r;
    if (__builtin_mul_overflow(x.v_, y.v_, &r)) overflow("multiplication");
    return r;
  }
  friend checked_int64 operator/(checked_int64 x, checked_int64 y) {
    if (y.v_ == 0) throw std::domain_error("checked_int64: division by zero");
    if (x.v_ == std::numeric_limits<std::int64_t>::min() && y.v_ == -1) overflow("division");
    return x.v_ / y.v_;
  }
  friend checked_int64 operator%(checked_int64 x, checked_int64 y) {
    if (y.v_ == 0) throw std::domain_error("checked_int64: division by zero");
    if (y.v_ == -1) return 0;
    return x.v_ % y.v_;
  }
  checked_int64 operator-() const {
    if (v_ == std::numeric_limits<std::int64_t>::min()) overflow("negation");
    return -v_;
  }
  checked_int64& operator+=(checked_int64 y) { return *this = *this + y; }
  checked_int64& operator-=(checked_int64 y) { return *this = *this - y; }
  checked_int64& operator*=(checked_int64 y) { return *this = *this * y; }

  friend constexpr bool operator==(checked_int64, checked_int64) = default;
  friend constexpr auto operator<=>(checked_int64, checked_int64) = default;

  friend std::ostream& operator<<(std::ostream& os, checked_int64 x) { return os << x.v_; }

 private:
  [[noreturn]] static void overflow(const char* what) {
    throw std::overflow_error(std::string("checked_int64: overflow in ") + what);
  }
  std::int64_t v_ = 0;
};

// Backend-generic helpers. Overloads rather than a traits class: the set of
// backends is closed.

inline BigInt abs_of(const BigInt& x) { return boost::multiprecision::abs(x); }
inline checked_int64 abs_of(checked_int64 x) { return x < 0 ? -x : x; }

inline BigInt gcd_of(const BigInt& x, const BigInt& y) { return boost::multiprecision::gcd(x, y); }
inline checked_int64 gcd_of(checked_int64 x, checked_int64 y) {
  std::int64_t a = abs_of(x).value();
  std::int64_t b = abs_of(y).value();
  while (b != 0) {
    std::int64_t r = a % b;
    a = b;
    b = r;
  }
  return a;
}

inline int sign_of(const BigInt& x) { return x.sign(); }
inline int sign_of(checked_int64 x) { return (x.value() > 0) - (x.value() < 0); }

inline const BigInt& to_big(const BigInt& x) { return x; }
inline BigInt to_big(checked_int64 x) { return BigInt(x.value()); }

template <class Int>
Int from_big(const BigInt& x);

template <>
inline BigInt from_big<BigInt>(const BigInt& x) {
  return x;
}

template <>
inline checked_int64 from_big<checked_int64>(const BigInt& x) {
  if (x > std::numeric_limits<std::int64_t>::max() || x < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("checked_int64: value out of 64-bit range");
  return x.convert_to<std::int64_t>();
}

template <>
inline long long from_big<long long>(const BigInt& x) {
  if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min())
    throw std::overflow_error("value out of 64-bit range");
  return x.convert_to<long long>();
}

inline std::strong_ordering compare3(const BigInt& x, const BigInt& y) {
  int c = x.compare(y);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}
inline std::strong_ordering compare3(checked_int64 x, checked_int64 y) { return x <=> y; }

inline std::string to_string(const BigInt& x) { return x.str(); }
inline std::string to_string(checked_int64 x) { return std::to_string(x.value()); }

inline std::size_t hash_of(const BigInt& x) { return boost::multiprecision::hash_value(x); }
inline std::size_t hash_of(checked_int64 x) { return std::hash<std::int64_t>{}(x.value()); }

inline void hash_combine(std::size_t& seed, std::size_t h) {
  seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

/// Exact "p/q" text for a rational; the denominator is always printed.
inline std::string rational_text(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "p/q" or an integer "p".
inline Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

template <class Int>
Rational make_rational(const Int& num, const Int& den) {
  return Rational(to_big(num), to_big(den));
}

}  // namespace corona
