#pragma once

// Memoized defects for large lattice scans.
//
// mu_s(t) depends only on the signature of t: the base edge and the first
// K = s - 1 letters of the walk (plus, for naive walks, whether the stream
// ended). Signatures are interned to small ids, measures are built once per
// id, and every l1 distance is memoized on the ids involved. The engine is
// not thread safe; use one per worker.

#include "corona/farey_walk.hpp"
#include "corona/witness.hpp"

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace corona {

/// A nonnegative fraction num/den with small integers.
struct SmallFrac {
  std::int64_t num = 0;
  std::int64_t den = 1;

  [[nodiscard]] Rational value() const { return Rational(BigInt(num), BigInt(den)); }

  friend bool operator<(const SmallFrac& x, const SmallFrac& y) {
    return static_cast<__int128>(x.num) * y.den < static_cast<__int128>(y.num) * x.den;
  }
};

/// Does x + y >= 1/n hold?
inline bool sum_reaches(const SmallFrac& x, const SmallFrac& y, std::int64_t n) {
  __int128 lhs = static_cast<__int128>(n) * (static_cast<__int128>(x.num) * y.den + static_cast<__int128>(y.num) * x.den);
  return lhs >= static_cast<__int128>(x.den) * y.den;
}

class SignatureEngine {
 public:
  /// `group` is the finite set of g the defects range over. Tables are
  /// cleared between points once they hold more than `max_keys` measure atoms.
  SignatureEngine(WalkVariant family, std::uint64_t prefix, std::vector<SmallElement> group,
                  std::size_t max_keys = std::size_t(1) << 22)
      : family_(family), prefix_(prefix), letters_(static_cast<std::int64_t>(prefix) - 1),
        group_(std::move(group)), max_keys_(max_keys) {
    if (prefix == 0) throw std::invalid_argument("prefix length must be positive");
  }

  [[nodiscard]] std::uint64_t prefix() const { return prefix_; }
  [[nodiscard]] WalkVariant family() const { return family_; }
  [[nodiscard]] const std::vector<SmallElement>& group() const { return group_; }
  [[nodiscard]] std::size_t stored_keys() const { return stored_keys_; }

  /// The edge [u v] reached after K letters when the mediant phase is longer
  /// than that; t then lies strictly inside its arc.
  struct Shape {
    bool interior = false;
    std::int64_t u1 = 0, u2 = 0, v1 = 0, v2 = 0;
  };

  /// Signature of the primitive, sign normalized point (p, q).
  void signature(std::int64_t p, std::int64_t q, std::vector<std::int64_t>& code, Shape* shape = nullptr) const {
    code.clear();
    std::int64_t budget = letters_;
    auto push = [&](Move x, std::int64_t k) {
      if (budget <= 0 || k <= 0) return;
      if (k > budget) k = budget;
      budget -= k;
      const std::int64_t mv = x == Move::T ? 0 : 1;
      if (code.size() > 1 && (code.back() & 1) == mv)
        code.back() += 2 * k;
      else
        code.push_back(2 * k + mv);
    };
    if (shape) shape->interior = false;
    if (q == 0 || p == 0) {
      // the base edge itself: naive walks stop, tails run along T or L
      code.push_back(0);
      if (family_ == WalkVariant::naive) {
        if (budget > 0) code.push_back(q == 0 ? -1 : -2);
      } else {
        push(q == 0 ? Move::T : Move::L, budget);
      }
      return;
    }
    std::int64_t alpha, beta;
    std::int64_t u1, u2, v1, v2;
    if (p > 0) {
      code.push_back(0);
      alpha = p, beta = q;
      u1 = 1, u2 = 0, v1 = 0, v2 = 1;
    } else {
      code.push_back(1);
      alpha = q, beta = -p;
      u1 = 0, u2 = 1, v1 = -1, v2 = 0;
    }
    while (alpha != beta) {
      if (budget <= 0) {
        code.push_back(interior_mark);
        if (shape) *shape = {true, u1, u2, v1, v2};
        return;
      }
      if (alpha > beta) {
        std::int64_t k = (alpha - 1) / beta;
        if (k > budget) k = budget;
        alpha -= k * beta;
        v1 += k * u1, v2 += k * u2;
        push(Move::T, k);
      } else {
        std::int64_t k = (beta - 1) / alpha;
        if (k > budget) k = budget;
        beta -= k * alpha;
        u1 += k * v1, u2 += k * v2;
        push(Move::L, k);
      }
    }
    if (budget <= 0) {
      // the K letters stop just short of the final L: t is the mediant of [u v]
      code.push_back(interior_mark);
      if (shape) *shape = {true, u1, u2, v1, v2};
      return;
    }
    push(Move::L, 1);
    if (budget > 0) {
      if (family_ == WalkVariant::naive)
        code.push_back(-1);
      else
        push(Move::T, budget);
    }
  }

  /// Interned id of the signature of t = (p, q), with q > 0 or (p, q) = (1, 0).
  /// Ids stay valid until reset(), which pair_max calls between points.
  std::uint32_t intern(std::int64_t p, std::int64_t q, Shape* shape = nullptr) {
    signature(p, q, scratch_, shape);
    if (auto it = ids_.find(scratch_); it != ids_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(reps_.size());
    ids_.emplace(scratch_, id);
    reps_.push_back({p, q});
    measures_.emplace_back();
    group_max_.emplace_back();
    slots_.resize(reps_.size() * group_.size(), SmallFrac{0, 0});
    return id;
  }

  const CompactMeasure& measure(std::uint32_t id) {
    auto& m = measures_[id];
    if (m.keys.empty()) {
      auto [p, q] = reps_[id];
      m = compact_mu(SmallPoint::normalize(p, q), prefix_, family_);
      stored_keys_ += m.keys.size();
    }
    return m;
  }

  /// || mu(t') - mu(t) || for two interned ids.
  SmallFrac shift_defect(std::uint32_t a, std::uint32_t b) {
    if (a == b) return {0, 1};
    if (a > b) std::swap(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    if (auto it = shift_memo_.find(key); it != shift_memo_.end()) return it->second;
    const auto& x = measure(a);
    const auto& y = measure(b);
    SmallFrac f{l1_numerator(x, y), x.total * y.total};
    shift_memo_.emplace(key, f);
    return f;
  }

  /// || mu(g t) - g mu(t) || for g = group()[gi] and t = (p, q) with id `id`.
  /// With `nested`, also reports whether g maps the arc of t's shape into
  /// the arc of g t's shape (so the value holds on the whole arc).
  SmallFrac group_defect(std::size_t gi, std::int64_t p, std::int64_t q, std::uint32_t id,
                         const Shape* shape = nullptr, bool* nested = nullptr) {
    const SmallElement& g = group_[gi];
    const std::int64_t a = g.a().value(), b = g.b().value(), c = g.c().value(), d = g.d().value();
    std::int64_t gp = a * p + b * q;
    std::int64_t gq = c * p + d * q;
    if (gq < 0 || (gq == 0 && gp < 0)) gp = -gp, gq = -gq;
    Shape gshape;
    const std::uint32_t gid = intern(gp, gq, nested ? &gshape : nullptr);
    if (nested) {
      *nested = false;
      if (shape && shape->interior && gshape.interior) {
        // coordinates of g u and g v in the basis [u' v'] (determinant 1)
        auto coords = [&](std::int64_t x1, std::int64_t x2, std::int64_t out[2]) {
          const std::int64_t w1 = a * x1 + b * x2, w2 = c * x1 + d * x2;
          out[0] = w1 * gshape.v2 - w2 * gshape.v1;
          out[1] = gshape.u1 * w2 - gshape.u2 * w1;
        };
        std::int64_t cu[2], cv[2];
        coords(shape->u1, shape->u2, cu);
        coords(shape->v1, shape->v2, cv);
        const bool nonneg = cu[0] >= 0 && cu[1] >= 0 && cv[0] >= 0 && cv[1] >= 0;
        const bool nonpos = cu[0] <= 0 && cu[1] <= 0 && cv[0] <= 0 && cv[1] <= 0;
        *nested = nonneg || nonpos;
      }
    }
    const std::uint64_t key = (static_cast<std::uint64_t>(gi) << 48) ^ (static_cast<std::uint64_t>(id) << 24) ^ gid;
    if (auto it = group_memo_.find(key); it != group_memo_.end()) {
      for (const auto& e : it->second)
        if (e.gi == gi && e.id == id && e.gid == gid) return e.value;
    }
    CompactMeasure moved = translate(g, measure(id));
    const auto& target = measure(gid);
    SmallFrac f{l1_numerator(target, moved), target.total * moved.total};
    group_memo_[key].push_back({gi, id, gid, f});
    return f;
  }

  struct Result {
    SmallFrac group_part;
    SmallFrac shift_part;
    std::size_t argmax_g = 0;
    std::int64_t a1 = 0, a2 = 0;
    bool cone = false;  // shift part settled by the cone test
  };

  /// Maximum over g in group() and a in box(radius), y + a != 0, of
  /// || zeta(g y) - g zeta(y) || + || zeta(y + a) - zeta(y) ||.
  /// With stop_at = n > 0, returns as soon as the sum reaches 1/n; the parts
  /// are then lower bounds.
  Result pair_max(std::int64_t m, std::int64_t n, std::int64_t radius, std::int64_t stop_at = 0) {
    if (m == 0 && n == 0) throw std::domain_error("pair defect undefined at y = 0");
    if (stored_keys_ > max_keys_ || slots_.size() > max_keys_) reset();
    Result r;
    std::int64_t g0 = std::gcd(m, n);
    std::int64_t p = m / g0, q = n / g0;
    if (q < 0 || (q == 0 && p < 0)) p = -p, q = -q;
    Shape shape;
    const std::uint32_t id = intern(p, q, &shape);

    auto stop = [&] { return stop_at > 0 && sum_reaches(r.group_part, r.shift_part, stop_at); };
    // per g values are kept when they hold on the whole arc of the signature
    auto scan_group = [&] {
      bool all_shared = true;
      for (std::size_t i = 0; i < group_.size(); ++i) {
        const std::size_t k = id * group_.size() + i;
        SmallFrac d = slots_[k];
        if (d.den == 0) {
          bool nested = false;
          d = group_defect(i, p, q, id, &shape, &nested);
          if (!shape.interior || nested)
            slots_[k] = d;
          else
            all_shared = false;
        }
        if (r.group_part < d) r.group_part = d, r.argmax_g = i;
        if (stop()) return false;
      }
      if (all_shared) group_max_[id] = {true, r.group_part, r.argmax_g};
      return true;
    };
    auto scan_shifts = [&] {
      for (std::int64_t a1 = -radius; a1 <= radius; ++a1) {
        for (std::int64_t a2 = -radius; a2 <= radius; ++a2) {
          std::int64_t zm = m + a1, zn = n + a2;
          if (zm == 0 && zn == 0) continue;
          std::int64_t gz = std::gcd(zm, zn);
          std::int64_t zp = zm / gz, zq = zn / gz;
          if (zq < 0 || (zq == 0 && zp < 0)) zp = -zp, zq = -zq;
          if (zp == p && zq == q) continue;
          SmallFrac d = shift_defect(id, intern(zp, zq));
          if (r.shift_part < d) {
            r.shift_part = d;
            r.a1 = a1, r.a2 = a2;
          }
          if (stop()) return false;
        }
      }
      return true;
    };

    auto take_group = [&] {
      if (!group_max_[id].known) return false;
      r.group_part = group_max_[id].value;
      r.argmax_g = group_max_[id].argmax;
      return true;
    };
    if (!shape.interior) {
      // the signature pins the point; its neighbours usually differ a lot,
      // so the shifts go first
      if (scan_shifts() && !take_group()) scan_group();
      return r;
    }
    if (!take_group() && !scan_group()) return r;
    if (stop()) return r;

    // y + a stays strictly inside the arc of [u v] for every |a|_inf <= radius
    std::int64_t alpha = m * shape.v2 - n * shape.v1;
    std::int64_t beta = shape.u1 * n - shape.u2 * m;
    if (alpha < 0) alpha = -alpha, beta = -beta;
    if (beta > 0 && alpha > radius * (std::abs(shape.v1) + std::abs(shape.v2)) &&
        beta > radius * (std::abs(shape.u1) + std::abs(shape.u2))) {
      r.cone = true;
      return r;
    }
    scan_shifts();
    return r;
  }

  /// Does y belong to D_n, i.e. does pair_max reach 1/n?
  bool reaches(std::int64_t m, std::int64_t n, std::int64_t radius, std::int64_t level) {
    auto r = pair_max(m, n, radius, level);
    return sum_reaches(r.group_part, r.shift_part, level);
  }

  void reset() {
    ids_.clear();
    reps_.clear();
    measures_.clear();
    group_max_.clear();
    slots_.clear();
    shift_memo_.clear();
    group_memo_.clear();
    stored_keys_ = 0;
  }

 private:
  // Ends the code of a point strictly inside the arc reached after K letters;
  // codes without it pin the point.
  static constexpr std::int64_t interior_mark = -3;

  struct CodeHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
      std::size_t seed = v.size();
      for (auto x : v) hash_combine(seed, std::hash<std::int64_t>{}(x));
      return seed;
    }
  };
  struct GroupEntry {
    std::size_t gi;
    std::uint32_t id, gid;
    SmallFrac value;
  };
  struct GroupMax {
    bool known = false;
    SmallFrac value;
    std::size_t argmax = 0;
  };

  WalkVariant family_;
  std::uint64_t prefix_;
  std::int64_t letters_;
  std::vector<SmallElement> group_;
  std::size_t max_keys_;
  std::size_t stored_keys_ = 0;
  std::vector<std::int64_t> scratch_;
  std::unordered_map<std::vector<std::int64_t>, std::uint32_t, CodeHash> ids_;
  std::vector<std::pair<std::int64_t, std::int64_t>> reps_;
  std::vector<CompactMeasure> measures_;
  std::vector<GroupMax> group_max_;
  std::vector<SmallFrac> slots_;  // den = 0 while unknown
  std::unordered_map<std::uint64_t, SmallFrac> shift_memo_;
  std::unordered_map<std::uint64_t, std::vector<GroupEntry>> group_memo_;
};

}  // namespace corona
