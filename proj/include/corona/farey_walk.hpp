#pragma once

// The extended Stern-Brocot walk toward a point t of the projective line.
//
// The walk keeps an edge matrix W = [u v] (columns are Farey neighbours) whose
// arc contains t, starting from the base edge {inf, 0}. With (alpha, beta) the
// coordinates of t in the basis (u, v):
//   alpha > beta  ->  move T:  W <- W T,  beta stays,  alpha -= beta
//   alpha < beta  ->  move L:  W <- W L,  alpha stays, beta  -= alpha
//   alpha = beta  ->  final move L, after which the first column of W is t.
// The base edge is I for t > 0 and S for t < 0; the base matrix itself is not
// emitted, element 0 of every walk is the identity. Walks toward inf and 0
// have an empty mediant phase and go straight into the tails T^j and L^j.
//
// The tails variant continues after the final edge W_d with W_d T^j. The
// mirror walk pairs each element R X^j of a run (R the matrix where the run
// of X started) with R X^-j S, the same cusp fan walked from the opposite
// orientation of the edge; element 0 is paired with S.

#include "corona/integer.hpp"
#include "corona/modular_group.hpp"
#include "corona/projective_line.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace corona {

enum class WalkVariant { naive, tails, symmetrized };

inline const char* variant_name(WalkVariant v) {
  switch (v) {
    case WalkVariant::naive: return "naive";
    case WalkVariant::tails: return "tails";
    case WalkVariant::symmetrized: return "symmetrized";
  }
  return "?";
}

inline WalkVariant parse_variant(const std::string& s) {
  if (s == "naive") return WalkVariant::naive;
  if (s == "tails") return WalkVariant::tails;
  if (s == "symmetrized") return WalkVariant::symmetrized;
  throw std::invalid_argument("unknown family '" + s + "' (expected naive, tails or symmetrized)");
}

enum class Move : std::uint8_t { T = 0, L = 1 };

template <class Int>
basic_group_element<Int> move_matrix(Move x) {
  return x == Move::T ? basic_group_element<Int>::T() : basic_group_element<Int>::L();
}

template <class Int>
basic_group_element<Int> move_inverse(Move x) {
  return x == Move::T ? basic_group_element<Int>::T_inv() : basic_group_element<Int>::L_inv();
}

// Right multiplication by the elementary moves, written out.
template <class Int>
basic_group_element<Int> times_move(const basic_group_element<Int>& w, Move x) {
  if (x == Move::T) return basic_group_element<Int>::trusted(w.a(), w.a() + w.b(), w.c(), w.c() + w.d());
  return basic_group_element<Int>::trusted(w.a() + w.b(), w.b(), w.c() + w.d(), w.d());
}

template <class Int>
basic_group_element<Int> times_move_inverse(const basic_group_element<Int>& w, Move x) {
  if (x == Move::T) return basic_group_element<Int>::trusted(w.a(), w.b() - w.a(), w.c(), w.d() - w.c());
  return basic_group_element<Int>::trusted(w.a() - w.b(), w.b(), w.c() - w.d(), w.d());
}

template <class Int>
basic_group_element<Int> times_S(const basic_group_element<Int>& w) {
  return basic_group_element<Int>::trusted(w.b(), -w.a(), w.d(), -w.c());
}

template <class Int>
struct basic_move_run {
  Move move;
  Int count;
};

/// The letters of the walk toward t, run-length encoded.
template <class Int>
struct basic_walk_word {
  basic_projective_point<Int> target = basic_projective_point<Int>::infinity();
  bool negative = false;                       // base edge S instead of I
  std::vector<basic_move_run<Int>> mediant;    // ends with an L when nonempty
  Move tail = Move::T;
  Int depth{0};

  [[nodiscard]] basic_group_element<Int> base() const {
    return negative ? basic_group_element<Int>::S() : basic_group_element<Int>::identity();
  }

  /// The edge matrix after the mediant phase.
  [[nodiscard]] basic_group_element<Int> final_edge() const {
    basic_group_element<Int> w = base();
    for (const auto& r : mediant) w = w * power(move_matrix<Int>(r.move), from_big<long long>(to_big(r.count)));
    return w;
  }
};

template <class Int>
basic_walk_word<Int> walk_word(const basic_projective_point<Int>& t) {
  basic_walk_word<Int> w;
  w.target = t;
  if (t.n() == 0) return w;
  if (t.m() == 0) {
    w.tail = Move::L;
    return w;
  }
  Int alpha, beta;
  if (t.m() > 0) {
    alpha = t.m();
    beta = t.n();
  } else {
    w.negative = true;
    alpha = t.n();
    beta = -t.m();
  }
  auto push = [&w](Move x, const Int& k) {
    if (!w.mediant.empty() && w.mediant.back().move == x)
      w.mediant.back().count += k;
    else
      w.mediant.push_back({x, k});
    w.depth += k;
  };
  while (alpha != beta) {
    if (alpha > beta) {
      Int k = (alpha - Int(1)) / beta;
      alpha -= k * beta;
      push(Move::T, k);
    } else {
      Int k = (beta - Int(1)) / alpha;
      beta -= k * alpha;
      push(Move::L, k);
    }
  }
  push(Move::L, Int(1));
  return w;
}

template <class Int>
Int depth(const basic_projective_point<Int>& t) {
  return walk_word(t).depth;
}

/// Generator of the stabilizer of t: W T W^-1 for the final edge W; T at inf, L at 0.
template <class Int>
basic_psl_class<Int> parabolic_generator(const basic_projective_point<Int>& t) {
  if (t.n() == 0) return basic_psl_class<Int>(basic_group_element<Int>::T());
  if (t.m() == 0) return basic_psl_class<Int>(basic_group_element<Int>::L());
  auto w = walk_word(t).final_edge();
  return basic_psl_class<Int>(w * basic_group_element<Int>::T() * invert(w));
}

/// The mediant vertex visited at each step of the mediant phase.
template <class Int>
std::vector<basic_projective_point<Int>> mediant_vertices(const basic_projective_point<Int>& t) {
  auto word = walk_word(t);
  std::vector<basic_projective_point<Int>> out;
  basic_group_element<Int> w = word.base();
  for (const auto& r : word.mediant) {
    for (Int i(0); i < r.count; i += Int(1)) {
      out.push_back(basic_projective_point<Int>::normalize(w.a() + w.b(), w.c() + w.d()));
      w = times_move(w, r.move);
    }
  }
  return out;
}

template <class Int>
struct basic_walk_step {
  basic_psl_class<Int> own;
  basic_psl_class<Int> mirror;
};

/// Lazy cursor over the walk toward t. naive streams end after the mediant
/// phase; tails and symmetrized streams are infinite. For the symmetrized
/// variant each step also carries the mirror element.
template <class Int>
class basic_walk_stream {
 public:
  basic_walk_stream(const basic_projective_point<Int>& t, WalkVariant variant)
      : word_(walk_word(t)), variant_(variant) {
    restart();
  }

  [[nodiscard]] const basic_walk_word<Int>& word() const { return word_; }
  [[nodiscard]] WalkVariant variant() const { return variant_; }
  [[nodiscard]] const basic_projective_point<Int>& target() const { return word_.target; }

  void restart() {
    w_ = word_.base();
    emitted_ = 0;
    run_ = 0;
    left_in_run_ = word_.mediant.empty() ? Int(0) : word_.mediant.front().count;
    in_tail_ = word_.mediant.empty();
    run_start_ = w_;
    back_ = w_;
  }

  [[nodiscard]] bool has_next() const {
    if (emitted_ == 0 || variant_ != WalkVariant::naive) return true;
    return !in_tail_;
  }

  /// Number of elements emitted so far.
  [[nodiscard]] std::uint64_t position() const { return emitted_; }

  basic_walk_step<Int> next_step() {
    using G = basic_group_element<Int>;
    if (!has_next()) throw std::out_of_range("walk stream exhausted");
    if (emitted_++ == 0) return {basic_psl_class<Int>::identity(), basic_psl_class<Int>(G::S())};
    Move x = in_tail_ ? word_.tail : word_.mediant[run_].move;
    w_ = times_move(w_, x);
    back_ = times_move_inverse(back_, x);
    basic_walk_step<Int> step{basic_psl_class<Int>(w_), basic_psl_class<Int>(times_S(back_))};
    if (!in_tail_) {
      left_in_run_ -= Int(1);
      if (left_in_run_ == 0) {
        ++run_;
        if (run_ == word_.mediant.size()) {
          in_tail_ = true;
        } else {
          left_in_run_ = word_.mediant[run_].count;
        }
        Move next = in_tail_ ? word_.tail : word_.mediant[run_].move;
        if (next != x) {
          run_start_ = w_;
          back_ = w_;
        }
      }
    }
    return step;
  }

  basic_psl_class<Int> next() { return next_step().own; }

 private:
  basic_walk_word<Int> word_;
  WalkVariant variant_;
  basic_group_element<Int> w_;
  basic_group_element<Int> run_start_;
  basic_group_element<Int> back_;  // run_start X^-j
  std::uint64_t emitted_ = 0;
  std::size_t run_ = 0;
  Int left_in_run_{0};
  bool in_tail_ = false;
};

using WalkStream = basic_walk_stream<BigInt>;

template <class Int>
basic_walk_stream<Int> walk(const basic_projective_point<Int>& t, WalkVariant variant) {
  return basic_walk_stream<Int>(t, variant);
}

/// The first n elements of the stream (fewer for a finished naive stream).
template <class Int>
std::vector<basic_psl_class<Int>> prefix(basic_walk_stream<Int> w, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("prefix length must be positive");
  w.restart();
  std::vector<basic_psl_class<Int>> out;
  while (out.size() < n && w.has_next()) out.push_back(w.next());
  return out;
}

/// First n elements of the mirror walk paired with prefix(w, n).
template <class Int>
std::vector<basic_psl_class<Int>> mirror_prefix(basic_walk_stream<Int> w, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("prefix length must be positive");
  w.restart();
  std::vector<basic_psl_class<Int>> out;
  while (out.size() < n && w.has_next()) out.push_back(w.next_step().mirror);
  return out;
}

/// Index from which walk(g t, tails) and g walk(t, tails) coincide.
///
/// Both streams are followed for max(depth) + extra steps. Once merged they
/// agree up to a constant shift, so the alignment is read off the last
/// element of either stream. Returns max(i, j) for the first positions i, j of
/// the common suffix, or nothing when the streams do not share at least
/// extra / 2 trailing elements.
template <class Int>
std::optional<std::uint64_t> equivariance_drift(const basic_group_element<Int>& g,
                                                const basic_projective_point<Int>& t, std::uint64_t extra = 32) {
  auto gt = act_boundary(g, t);
  basic_walk_stream<Int> a(gt, WalkVariant::tails);
  basic_walk_stream<Int> b(t, WalkVariant::tails);
  Int d = a.word().depth > b.word().depth ? a.word().depth : b.word().depth;
  const std::int64_t h = from_big<long long>(to_big(d)) + static_cast<std::int64_t>(extra);
  std::vector<basic_psl_class<Int>> xs, ys;
  std::unordered_map<basic_psl_class<Int>, std::int64_t> where_x, where_y;
  for (std::int64_t i = 0; i < h; ++i) {
    xs.push_back(a.next());
    ys.push_back(basic_psl_class<Int>(g) * b.next());
    where_x.emplace(xs.back(), i);
    where_y.emplace(ys.back(), i);
  }
  std::int64_t shift;  // xs[i] == ys[i + shift]
  if (auto it = where_y.find(xs.back()); it != where_y.end())
    shift = it->second - (h - 1);
  else if (auto jt = where_x.find(ys.back()); jt != where_x.end())
    shift = (h - 1) - jt->second;
  else
    return std::nullopt;
  std::int64_t i = shift <= 0 ? h - 1 : h - 1 - shift;
  std::int64_t run = 0;
  while (i >= 0 && i + shift >= 0 && xs[i] == ys[i + shift]) {
    --i;
    ++run;
  }
  if (run < static_cast<std::int64_t>(extra / 2)) return std::nullopt;
  std::int64_t i0 = i + 1;
  return static_cast<std::uint64_t>(std::max(i0, i0 + shift));
}

}  // namespace corona
