#pragma once

// SL(2,Z), its quotient PSL(2,Z), the actions on Z^2 and on the projective
// line, and word balls for the generating set {S, T, T^-1}.

#include "corona/integer.hpp"
#include "corona/projective_line.hpp"

#include <algorithm>
#include <compare>
#include <ostream>
#include <regex>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace corona {

template <class Int>
struct basic_lattice_vector {
  Int m{};
  Int n{};

  [[nodiscard]] bool is_zero() const { return m == 0 && n == 0; }

  friend basic_lattice_vector operator+(const basic_lattice_vector& x, const basic_lattice_vector& y) {
    return {x.m + y.m, x.n + y.n};
  }
  friend basic_lattice_vector operator-(const basic_lattice_vector& x, const basic_lattice_vector& y) {
    return {x.m - y.m, x.n - y.n};
  }
  basic_lattice_vector operator-() const { return {-m, -n}; }

  friend bool operator==(const basic_lattice_vector&, const basic_lattice_vector&) = default;
  friend std::strong_ordering operator<=>(const basic_lattice_vector& x, const basic_lattice_vector& y) {
    if (auto c = compare3(x.m, y.m); c != 0) return c;
    return compare3(x.n, y.n);
  }

  [[nodiscard]] std::string text() const { return "(" + to_string(m) + "," + to_string(n) + ")"; }
  friend std::ostream& operator<<(std::ostream& os, const basic_lattice_vector& v) { return os << v.text(); }
};

using LatticeVector = basic_lattice_vector<BigInt>;

/// A 2x2 integer matrix [[a,b],[c,d]] with ad - bc = 1.
template <class Int>
class basic_group_element {
 public:
  basic_group_element() : a_(1), b_(0), c_(0), d_(1) {}

  /// Throws std::invalid_argument unless ad - bc = 1.
  basic_group_element(Int a, Int b, Int c, Int d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (a_ * d_ - b_ * c_ != 1) throw std::invalid_argument("determinant is not 1");
  }

  static basic_group_element identity() { return {}; }
  static basic_group_element S() { return trusted(0, -1, 1, 0); }
  static basic_group_element T() { return trusted(1, 1, 0, 1); }
  static basic_group_element T_inv() { return trusted(1, -1, 0, 1); }
  static basic_group_element L() { return trusted(1, 0, 1, 1); }
  static basic_group_element L_inv() { return trusted(1, 0, -1, 1); }

  /// Skips the determinant check; callers guarantee it.
  static basic_group_element trusted(Int a, Int b, Int c, Int d) {
    basic_group_element g;
    g.a_ = std::move(a);
    g.b_ = std::move(b);
    g.c_ = std::move(c);
    g.d_ = std::move(d);
    return g;
  }

  [[nodiscard]] const Int& a() const { return a_; }
  [[nodiscard]] const Int& b() const { return b_; }
  [[nodiscard]] const Int& c() const { return c_; }
  [[nodiscard]] const Int& d() const { return d_; }

  [[nodiscard]] Int determinant() const { return a_ * d_ - b_ * c_; }
  [[nodiscard]] bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }

  [[nodiscard]] basic_group_element negated() const { return trusted(-a_, -b_, -c_, -d_); }

  /// The representative of {M, -M} whose first nonzero entry in the order
  /// a, b, c, d is positive.
  [[nodiscard]] basic_group_element canonical() const {
    int s = sign_of(a_);
    if (s == 0) s = sign_of(b_);
    return s < 0 ? negated() : *this;
  }

  friend bool operator==(const basic_group_element&, const basic_group_element&) = default;
  friend std::strong_ordering operator<=>(const basic_group_element& x, const basic_group_element& y) {
    if (auto c = compare3(x.a_, y.a_); c != 0) return c;
    if (auto c = compare3(x.b_, y.b_); c != 0) return c;
    if (auto c = compare3(x.c_, y.c_); c != 0) return c;
    return compare3(x.d_, y.d_);
  }

  [[nodiscard]] std::string text() const {
    return "[[" + to_string(a_) + "," + to_string(b_) + "],[" + to_string(c_) + "," + to_string(d_) + "]]";
  }
  friend std::ostream& operator<<(std::ostream& os, const basic_group_element& g) { return os << g.text(); }

 private:
  Int a_, b_, c_, d_;
};

using GroupElement = basic_group_element<BigInt>;

template <class Int>
basic_group_element<Int> compose(const basic_group_element<Int>& g, const basic_group_element<Int>& h) {
  return basic_group_element<Int>::trusted(g.a() * h.a() + g.b() * h.c(), g.a() * h.b() + g.b() * h.d(),
                                           g.c() * h.a() + g.d() * h.c(), g.c() * h.b() + g.d() * h.d());
}

template <class Int>
basic_group_element<Int> operator*(const basic_group_element<Int>& g, const basic_group_element<Int>& h) {
  return compose(g, h);
}

template <class Int>
basic_group_element<Int> invert(const basic_group_element<Int>& g) {
  return basic_group_element<Int>::trusted(g.d(), -g.b(), -g.c(), g.a());
}

/// g^k for any integer k, by repeated squaring.
template <class Int>
basic_group_element<Int> power(basic_group_element<Int> g, long long k) {
  if (k < 0) {
    g = invert(g);
    k = -k;
  }
  basic_group_element<Int> r;
  while (k > 0) {
    if (k & 1) r = r * g;
    g = g * g;
    k >>= 1;
  }
  return r;
}

template <class Int>
basic_lattice_vector<Int> act_lattice(const basic_group_element<Int>& g, const basic_lattice_vector<Int>& v) {
  return {g.a() * v.m + g.b() * v.n, g.c() * v.m + g.d() * v.n};
}

template <class Int>
basic_projective_point<Int> act_boundary(const basic_group_element<Int>& g, const basic_projective_point<Int>& p) {
  return basic_projective_point<Int>::normalize(g.a() * p.m() + g.b() * p.n(), g.c() * p.m() + g.d() * p.n());
}

template <class To, class From>
basic_group_element<To> convert(const basic_group_element<From>& g) {
  return basic_group_element<To>::trusted(from_big<To>(to_big(g.a())), from_big<To>(to_big(g.b())),
                                          from_big<To>(to_big(g.c())), from_big<To>(to_big(g.d())));
}

template <class To, class From>
basic_lattice_vector<To> convert(const basic_lattice_vector<From>& v) {
  return {from_big<To>(to_big(v.m)), from_big<To>(to_big(v.n))};
}

/// An element of PSL(2,Z), stored as its canonical SL representative.
template <class Int>
class basic_psl_class {
 public:
  basic_psl_class() = default;
  explicit basic_psl_class(const basic_group_element<Int>& g) : rep_(g.canonical()) {}

  static basic_psl_class identity() { return basic_psl_class(); }

  [[nodiscard]] const basic_group_element<Int>& element() const { return rep_; }
  [[nodiscard]] bool is_identity() const { return rep_.is_identity(); }
  [[nodiscard]] std::string text() const { return rep_.text(); }

  friend bool operator==(const basic_psl_class&, const basic_psl_class&) = default;
  friend std::strong_ordering operator<=>(const basic_psl_class& x, const basic_psl_class& y) {
    return x.rep_ <=> y.rep_;
  }
  friend std::ostream& operator<<(std::ostream& os, const basic_psl_class& g) { return os << g.rep_; }

 private:
  basic_group_element<Int> rep_;
};

using PslClass = basic_psl_class<BigInt>;

template <class Int>
basic_psl_class<Int> operator*(const basic_psl_class<Int>& g, const basic_psl_class<Int>& h) {
  return basic_psl_class<Int>(g.element() * h.element());
}

template <class Int>
basic_psl_class<Int> invert(const basic_psl_class<Int>& g) {
  return basic_psl_class<Int>(invert(g.element()));
}

/// Parses "[[a,b],[c,d]]" (whitespace allowed). Throws std::invalid_argument.
inline GroupElement parse_group_element(const std::string& text) {
  static const std::regex re(
      R"(\s*\[\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*,\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]\s*\]\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw std::invalid_argument("not a matrix: '" + text + "'");
  return GroupElement(BigInt(m[1].str()), BigInt(m[2].str()), BigInt(m[3].str()), BigInt(m[4].str()));
}

/// Parses "(m,n)" or "m,n".
inline LatticeVector parse_lattice_vector(const std::string& text) {
  static const std::regex re(R"(\s*\(?\s*(-?\d+)\s*,\s*(-?\d+)\s*\)?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw std::invalid_argument("not a lattice vector: '" + text + "'");
  return {BigInt(m[1].str()), BigInt(m[2].str())};
}

/// Word balls of PSL(2,Z) for {S, T, T^-1}, enumerated breadth first.
/// Ball r is the prefix of elements() of length size(r).
template <class Int>
class basic_word_balls {
 public:
  explicit basic_word_balls(int radius) {
    if (radius < 0) throw std::invalid_argument("word ball radius must be nonnegative");
    using G = basic_group_element<Int>;
    const G gens[] = {G::S(), G::T(), G::T_inv()};
    std::unordered_set<basic_psl_class<Int>> seen;
    elements_.push_back(basic_psl_class<Int>::identity());
    seen.insert(elements_.front());
    sizes_.push_back(1);
    std::size_t frontier = 0;
    for (int r = 1; r <= radius; ++r) {
      std::size_t end = elements_.size();
      for (std::size_t i = frontier; i < end; ++i) {
        for (const G& s : gens) {
          basic_psl_class<Int> next(elements_[i].element() * s);
          if (seen.insert(next).second) elements_.push_back(next);
        }
      }
      frontier = end;
      sizes_.push_back(elements_.size());
    }
  }

  [[nodiscard]] int radius() const { return static_cast<int>(sizes_.size()) - 1; }
  [[nodiscard]] std::size_t size(int r) const { return sizes_.at(static_cast<std::size_t>(r)); }
  [[nodiscard]] const std::vector<basic_psl_class<Int>>& elements() const { return elements_; }

  /// Ball r in breadth-first order.
  [[nodiscard]] std::vector<basic_psl_class<Int>> ball(int r) const {
    return {elements_.begin(), elements_.begin() + static_cast<std::ptrdiff_t>(size(r))};
  }

  /// Word length of the element at a given breadth-first index.
  [[nodiscard]] int length_at(std::size_t index) const {
    return static_cast<int>(std::upper_bound(sizes_.begin(), sizes_.end(), index) - sizes_.begin());
  }

 private:
  std::vector<basic_psl_class<Int>> elements_;
  std::vector<std::size_t> sizes_;
};

using WordBalls = basic_word_balls<BigInt>;

/// All PSL classes of word length at most r, sorted by canonical form.
inline std::vector<PslClass> word_ball(int r) {
  auto ball = WordBalls(r).ball(r);
  std::sort(ball.begin(), ball.end());
  return ball;
}

}  // namespace corona

template <class Int>
struct std::hash<corona::basic_group_element<Int>> {
  std::size_t operator()(const corona::basic_group_element<Int>& g) const noexcept {
    std::size_t seed = corona::hash_of(g.a());
    corona::hash_combine(seed, corona::hash_of(g.b()));
    corona::hash_combine(seed, corona::hash_of(g.c()));
    corona::hash_combine(seed, corona::hash_of(g.d()));
    return seed;
  }
};

template <class Int>
struct std::hash<corona::basic_psl_class<Int>> {
  std::size_t operator()(const corona::basic_psl_class<Int>& g) const noexcept {
    return std::hash<corona::basic_group_element<Int>>{}(g.element());
  }
};

template <class Int>
struct std::hash<corona::basic_lattice_vector<Int>> {
  std::size_t operator()(const corona::basic_lattice_vector<Int>& v) const noexcept {
    std::size_t seed = corona::hash_of(v.m);
    corona::hash_combine(seed, corona::hash_of(v.n));
    return seed;
  }
};
