#pragma once

// Rational points of the real projective line, in homogeneous coordinates,
// and the chordal metric on them.

#include "corona/integer.hpp"

#include <compare>
#include <ostream>
#include <stdexcept>
#include <string>

namespace corona {

/// A point [m:n] of R ∪ {∞} with rational coordinates.
///
/// Invariants: gcd(|m|,|n|) = 1, (m,n) ≠ (0,0), and the sign is canonical:
/// n > 0, or n = 0 and m = 1 (so ∞ is [1:0]).
template <class Int>
class basic_projective_point {
 public:
  /// Divides by the gcd and fixes the sign. Throws std::domain_error on (0,0).
  static basic_projective_point normalize(Int m, Int n) {
    if (m == 0 && n == 0) throw std::domain_error("not a projective point");
    Int g = gcd_of(m, n);
    m = m / g;
    n = n / g;
    if (n < 0 || (n == 0 && m < 0)) {
      m = -m;
      n = -n;
    }
    return basic_projective_point(std::move(m), std::move(n));
  }

  static basic_projective_point infinity() { return basic_projective_point(Int(1), Int(0)); }
  static basic_projective_point zero() { return basic_projective_point(Int(0), Int(1)); }

  [[nodiscard]] const Int& m() const { return m_; }
  [[nodiscard]] const Int& n() const { return n_; }
  [[nodiscard]] bool is_infinity() const { return n_ == 0; }

  friend bool operator==(const basic_projective_point&, const basic_projective_point&) = default;
  friend std::strong_ordering operator<=>(const basic_projective_point& x, const basic_projective_point& y) {
    if (auto c = compare3(x.m_, y.m_); c != 0) return c;
    return compare3(x.n_, y.n_);
  }

  /// "m/n", or "inf" for [1:0].
  [[nodiscard]] std::string text() const {
    if (is_infinity()) return "inf";
    return to_string(m_) + "/" + to_string(n_);
  }

  friend std::ostream& operator<<(std::ostream& os, const basic_projective_point& p) { return os << p.text(); }

 private:
  basic_projective_point(Int m, Int n) : m_(std::move(m)), n_(std::move(n)) {}
  Int m_;
  Int n_;
};

using ProjectivePoint = basic_projective_point<BigInt>;

/// Parses "m/n", an integer "m", or "inf".
inline ProjectivePoint parse_projective_point(const std::string& text) {
  if (text == "inf" || text == "∞") return ProjectivePoint::infinity();
  auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return ProjectivePoint::normalize(BigInt(text), BigInt(1));
    return ProjectivePoint::normalize(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("not a projective point: '" + text + "'");
  }
}

/// Squared chordal distance (ms−nr)² / ((m²+n²)(r²+s²)); lies in [0,1].
template <class Int>
Rational chordal_sq(const basic_projective_point<Int>& p, const basic_projective_point<Int>& q) {
  BigInt m = to_big(p.m()), n = to_big(p.n());
  BigInt r = to_big(q.m()), s = to_big(q.n());
  BigInt cross = m * s - n * r;
  return Rational(cross * cross, (m * m + n * n) * (r * r + s * s));
}

}  // namespace corona

template <class Int>
struct std::hash<corona::basic_projective_point<Int>> {
  std::size_t operator()(const corona::basic_projective_point<Int>& p) const noexcept {
    std::size_t seed = corona::hash_of(p.m());
    corona::hash_combine(seed, corona::hash_of(p.n()));
    return seed;
  }
};
