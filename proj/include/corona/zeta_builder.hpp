#pragma once

// The leveling construction over a finite window {y : 0 < |y|_inf <= M}:
//   Omega_0 = {0}
//   Omega_n = D_n  u  { g y, x + y + x' : y in Omega_{n-1}, g in E_n, x, x' in F_n }
//   l(y)    = min { n : y in Omega_n }
//   zeta(y) = (1 / l(y)) sum_{n < l(y)} zeta_n(y),  zeta_0 := zeta_1
// where D_n collects the y whose pair defect reaches 1/n for some
// (g, x, x') in E_n x F_n x F_n. Everything is intersected with the window;
// images that leave it are dropped and counted.

#include "corona/farey_walk.hpp"
#include "corona/group_measure.hpp"
#include "corona/integer.hpp"
#include "corona/modular_group.hpp"
#include "corona/parallel.hpp"
#include "corona/signature_engine.hpp"
#include "corona/witness.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <array>
#include <unordered_map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace corona {

/// Walk prefix used for zeta_n: s(n) = n or s(n) = 4 n^2.
enum class Schedule { linear, quadratic };

inline const char* schedule_name(Schedule s) { return s == Schedule::linear ? "linear" : "quadratic"; }

inline Schedule parse_schedule(const std::string& s) {
  if (s == "linear") return Schedule::linear;
  if (s == "quadratic") return Schedule::quadratic;
  throw std::invalid_argument("unknown scale '" + s + "' (expected linear or quadratic)");
}

/// Prefix length of zeta_n; zeta_0 uses the prefix of zeta_1.
inline std::uint64_t prefix_for_level(int n, Schedule s) {
  if (n < 0) throw std::invalid_argument("level must be nonnegative");
  const std::uint64_t k = static_cast<std::uint64_t>(std::max(n, 1));
  return s == Schedule::linear ? k : 4 * k * k;
}

inline std::vector<PslClass> enumerate_E(int n) {
  if (n < 0) throw std::invalid_argument("level must be nonnegative");
  return word_ball(n);
}

inline std::vector<LatticeVector> enumerate_F(int n) {
  if (n < 0) throw std::invalid_argument("level must be nonnegative");
  std::vector<LatticeVector> out;
  for (long a = -n; a <= n; ++a)
    for (long b = -n; b <= n; ++b) out.push_back({BigInt(a), BigInt(b)});
  return out;
}

inline std::vector<SmallElement> small_ball(int n) {
  std::vector<SmallElement> out;
  for (const auto& g : enumerate_E(n)) out.push_back(convert<checked_int64>(g.element()));
  return out;
}

/// D_n(g; x, x') restricted to the window of radius M, in row-major order.
inline std::vector<LatticeVector> compute_D(int n, const GroupElement& g, const LatticeVector& x,
                                            const LatticeVector& x1, std::int64_t M, WalkVariant family,
                                            Schedule schedule = Schedule::quadratic) {
  if (n < 1) throw std::invalid_argument("D_n needs n >= 1");
  if (M < 1) throw std::invalid_argument("window radius must be positive");
  WitnessEngine engine(family, prefix_for_level(n, schedule));
  const SmallElement gs = convert<checked_int64>(g);
  const SmallVector a = convert<checked_int64>(x + x1);
  const Rational threshold(1, n);
  std::vector<LatticeVector> out;
  for (std::int64_t m = -M; m <= M; ++m) {
    for (std::int64_t k = -M; k <= M; ++k) {
      SmallVector y{m, k};
      if (y.is_zero() || (y + a).is_zero()) continue;
      Rational d = engine.boundary_defect(gs, phi(y));
      if (!a.is_zero()) d += engine.shift_defect(y, a);
      if (d >= threshold) out.push_back({BigInt(m), BigInt(k)});
    }
  }
  return out;
}

struct LevelStats {
  int n = 0;
  std::uint64_t prefix = 0;
  std::int64_t omega = 0;          // |Omega_n| inside the window
  std::int64_t from_shifts = 0;    // new points reached by x + y + x'
  std::int64_t from_images = 0;    // new points reached by g y and not by shifts
  std::int64_t from_defect = 0;    // new points in D_n only
  std::int64_t evaluated = 0;      // D_n membership tests run
  std::int64_t image_exits = -1;   // (y, g) with g y outside the window; -1 when not tracked
  std::int64_t shift_exits = 0;    // (y, a) with y + a outside the window
  bool saturated = false;          // Omega_{n-1} already filled the window
};

class LevelTable {
 public:
  static constexpr int format_version = 1;

  LevelTable() = default;
  LevelTable(std::int64_t M, std::int64_t margin, int n_max, WalkVariant family, Schedule schedule)
      : M_(M), margin_(margin), n_max_(n_max), family_(family), schedule_(schedule),
        levels_(static_cast<std::size_t>((2 * M + 1) * (2 * M + 1)), static_cast<std::uint8_t>(n_max + 1)) {
    if (M < 1) throw std::invalid_argument("window radius must be positive");
    if (n_max < 1 || n_max > 250) throw std::invalid_argument("n_max must be in 1..250");
    if (margin < 0) throw std::invalid_argument("margin must be nonnegative");
  }

  [[nodiscard]] std::int64_t radius() const { return M_; }
  [[nodiscard]] std::int64_t margin() const { return margin_; }
  [[nodiscard]] int n_max() const { return n_max_; }
  [[nodiscard]] WalkVariant family() const { return family_; }
  [[nodiscard]] Schedule schedule() const { return schedule_; }
  [[nodiscard]] const std::vector<LevelStats>& stats() const { return stats_; }
  [[nodiscard]] std::int64_t side() const { return 2 * M_ + 1; }

  [[nodiscard]] bool in_window(std::int64_t m, std::int64_t n) const {
    return (m != 0 || n != 0) && m >= -M_ && m <= M_ && n >= -M_ && n <= M_;
  }
  [[nodiscard]] bool interior(std::int64_t m, std::int64_t n) const {
    const std::int64_t r = M_ - margin_;
    return (m != 0 || n != 0) && m >= -r && m <= r && n >= -r && n <= r;
  }

  /// l(y), or n_max + 1 when y lies in no stored Omega_n.
  [[nodiscard]] int level(std::int64_t m, std::int64_t n) const {
    if (!in_window(m, n)) throw std::out_of_range("point outside the window");
    return levels_[index(m, n)];
  }
  [[nodiscard]] bool known(std::int64_t m, std::int64_t n) const { return level(m, n) <= n_max_; }
  [[nodiscard]] bool in_omega(int k, std::int64_t m, std::int64_t n) const { return level(m, n) <= k; }

  /// Number of window points at each level 1..n_max + 1 (index 0 unused).
  [[nodiscard]] std::vector<std::int64_t> histogram(bool interior_only = false) const {
    std::vector<std::int64_t> h(static_cast<std::size_t>(n_max_ + 2), 0);
    for (std::int64_t m = -M_; m <= M_; ++m)
      for (std::int64_t n = -M_; n <= M_; ++n) {
        if (m == 0 && n == 0) continue;
        if (interior_only && !interior(m, n)) continue;
        ++h[levels_[index(m, n)]];
      }
    return h;
  }

  [[nodiscard]] std::string header() const {
    std::ostringstream out;
    out << "# corona-witness level table v" << format_version << '\n'
        << "# window " << M_ << '\n'
        << "# margin " << margin_ << '\n'
        << "# nmax " << n_max_ << '\n'
        << "# family " << variant_name(family_) << '\n'
        << "# scale " << schedule_name(schedule_) << '\n'
        << "# E word balls for {S, T, T^-1}, F boxes |a|_inf <= n\n";
    return out.str();
  }

  /// FNV-1a of the header and the level bytes, as 16 hex digits.
  [[nodiscard]] std::string digest() const {
    std::uint64_t h = 14695981039346656037ULL;
    auto feed = [&](unsigned char c) {
      h ^= c;
      h *= 1099511628211ULL;
    };
    for (char c : header()) feed(static_cast<unsigned char>(c));
    for (auto b : levels_) feed(b);
    static const char* hex = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = hex[h & 15];
    return s;
  }

  /// Header, then one "m n l" line per point with a known level.
  void write(std::ostream& out) const {
    out << header();
    for (std::int64_t m = -M_; m <= M_; ++m)
      for (std::int64_t n = -M_; n <= M_; ++n) {
        if (m == 0 && n == 0) continue;
        const int l = levels_[index(m, n)];
        if (l <= n_max_) out << m << ' ' << n << ' ' << l << '\n';
      }
  }

  static LevelTable read(std::istream& in) {
    std::string line;
    std::int64_t M = -1, margin = -1;
    int n_max = -1;
    std::string family, scale;
    while (in.peek() == '#' && std::getline(in, line)) {
      std::istringstream row(line.substr(1));
      std::string key;
      row >> key;
      if (key == "window") row >> M;
      else if (key == "margin") row >> margin;
      else if (key == "nmax") row >> n_max;
      else if (key == "family") row >> family;
      else if (key == "scale") row >> scale;
    }
    if (M < 1 || margin < 0 || n_max < 1 || family.empty() || scale.empty())
      throw std::invalid_argument("level table header is incomplete");
    LevelTable t(M, margin, n_max, parse_variant(family), parse_schedule(scale));
    std::int64_t m, n;
    int l;
    while (in >> m >> n >> l) {
      if (!t.in_window(m, n) || l < 1 || l > n_max) throw std::invalid_argument("bad level table line");
      t.levels_[t.index(m, n)] = static_cast<std::uint8_t>(l);
    }
    if (!in.eof()) throw std::invalid_argument("bad level table line");
    return t;
  }

  friend bool operator==(const LevelTable& x, const LevelTable& y) {
    return x.header() == y.header() && x.levels_ == y.levels_;
  }

 private:
  friend LevelTable build_levels(std::int64_t, int, WalkVariant, Schedule, std::int64_t, unsigned,
                                 const std::function<void(const LevelStats&)>&);

  [[nodiscard]] std::size_t index(std::int64_t m, std::int64_t n) const {
    return static_cast<std::size_t>((m + M_) * side() + (n + M_));
  }

  std::int64_t M_ = 0;
  std::int64_t margin_ = 0;
  int n_max_ = 0;
  WalkVariant family_ = WalkVariant::symmetrized;
  Schedule schedule_ = Schedule::quadratic;
  std::vector<std::uint8_t> levels_;
  std::vector<LevelStats> stats_;
};

namespace detail {

// out[i] = 1 when some in[j] with |i - j| <= r along rows (stride 1) or
// columns (stride side) is set.
inline void dilate_axis(const std::vector<std::uint8_t>& in, std::vector<std::uint8_t>& out, std::int64_t side,
                        std::int64_t r, bool rows) {
  std::vector<std::int64_t> prefix(static_cast<std::size_t>(side + 1));
  for (std::int64_t line = 0; line < side; ++line) {
    auto at = [&](std::int64_t k) {
      return static_cast<std::size_t>(rows ? line * side + k : k * side + line);
    };
    prefix[0] = 0;
    for (std::int64_t k = 0; k < side; ++k) prefix[static_cast<std::size_t>(k + 1)] = prefix[static_cast<std::size_t>(k)] + in[at(k)];
    for (std::int64_t k = 0; k < side; ++k) {
      const std::int64_t lo = std::max<std::int64_t>(0, k - r), hi = std::min(side, k + r + 1);
      out[at(k)] = prefix[static_cast<std::size_t>(hi)] > prefix[static_cast<std::size_t>(lo)] ? 1 : 0;
    }
  }
}

// Number of a in box(r) with y + a outside the window of radius M.
inline std::int64_t shift_exits(std::int64_t m, std::int64_t n, std::int64_t r, std::int64_t M) {
  auto inside = [&](std::int64_t c) { return std::min(M, c + r) - std::max(-M, c - r) + 1; };
  return (2 * r + 1) * (2 * r + 1) - inside(m) * inside(n);
}

}  // namespace detail

/// Default interior margin: n_max steps of the largest shift radius 2 n_max.
inline std::int64_t default_margin(int n_max) { return 2 * static_cast<std::int64_t>(n_max) * n_max; }

/// Builds l(y) on the window of radius M for levels 1..n_max.
inline LevelTable build_levels(std::int64_t M, int n_max, WalkVariant family, Schedule schedule,
                               std::int64_t margin, unsigned jobs = 1,
                               const std::function<void(const LevelStats&)>& progress = {}) {
  if (M < 2) throw std::invalid_argument("window too small to contain Omega_1 (need M >= 2)");
  if (M > (std::int64_t(1) << 20)) throw std::invalid_argument("window too large");
  LevelTable table(M, margin, n_max, family, schedule);
  const std::int64_t side = table.side();
  const std::size_t cells = static_cast<std::size_t>(side * side);
  const std::size_t origin = table.index(0, 0);
  const auto unset = static_cast<std::uint8_t>(n_max + 1);

  std::vector<std::uint8_t> prev(cells, 0), next(cells, 0), scratch(cells, 0);
  prev[origin] = 1;
  std::int64_t prev_count = 1;  // includes the origin

  for (int n = 1; n <= n_max; ++n) {
    LevelStats st;
    st.n = n;
    st.prefix = prefix_for_level(n, schedule);
    const std::int64_t r = 2 * n;

    if (prev_count == static_cast<std::int64_t>(cells)) {
      st.saturated = true;
      st.omega = prev_count - 1;
      table.stats_.push_back(st);
      if (progress) progress(st);
      continue;
    }

    // shifts x + y + x' with x + x' in box(2n)
    detail::dilate_axis(prev, scratch, side, r, true);
    detail::dilate_axis(scratch, next, side, r, false);
    for (std::int64_t m = -M; m <= M; ++m)
      for (std::int64_t k = -M; k <= M; ++k)
        if (prev[table.index(m, k)]) st.shift_exits += detail::shift_exits(m, k, r, M);
    std::int64_t after_shifts = 0;
    for (std::size_t i = 0; i < cells; ++i) after_shifts += next[i];
    st.from_shifts = after_shifts - prev_count;

    // images g y with g in E_n; E_n is symmetric, so z is an image iff some g z lies in Omega_{n-1}
    const auto group = small_ball(n);
    const std::int64_t uncovered = static_cast<std::int64_t>(cells) - after_shifts;
    if (prev_count <= uncovered) {
      st.image_exits = 0;
      for (std::int64_t m = -M; m <= M; ++m)
        for (std::int64_t k = -M; k <= M; ++k) {
          if (!prev[table.index(m, k)]) continue;
          for (const auto& g : group) {
            const std::int64_t gm = g.a().value() * m + g.b().value() * k;
            const std::int64_t gk = g.c().value() * m + g.d().value() * k;
            if (gm < -M || gm > M || gk < -M || gk > M) {
              ++st.image_exits;
              continue;
            }
            next[table.index(gm, gk)] = 1;
          }
        }
    } else {
      parallel_chunks(side, 8, jobs, [&](std::int64_t b, std::int64_t e, std::int64_t) {
        for (std::int64_t row = b; row < e; ++row) {
          const std::int64_t m = row - M;
          for (std::int64_t k = -M; k <= M; ++k) {
            const std::size_t i = table.index(m, k);
            if (next[i]) continue;
            for (const auto& g : group) {
              const std::int64_t gm = g.a().value() * m + g.b().value() * k;
              const std::int64_t gk = g.c().value() * m + g.d().value() * k;
              if (gm < -M || gm > M || gk < -M || gk > M) continue;
              if (prev[table.index(gm, gk)]) {
                next[i] = 1;
                break;
              }
            }
          }
        }
      });
    }
    std::int64_t after_images = 0;
    for (std::size_t i = 0; i < cells; ++i) after_images += next[i];
    st.from_images = after_images - after_shifts;

    // D_n on what is left; D_n is symmetric under y -> -y, so only the
    // half window m > 0 or (m = 0, k > 0) is evaluated
    std::mutex pool_mutex;
    std::vector<std::unique_ptr<SignatureEngine>> pool;
    std::vector<std::int64_t> evaluated(static_cast<std::size_t>(M + 1), 0), added(static_cast<std::size_t>(M + 1), 0);
    parallel_chunks(M + 1, 4, jobs, [&](std::int64_t b, std::int64_t e, std::int64_t) {
      std::unique_ptr<SignatureEngine> engine;
      {
        std::lock_guard<std::mutex> lock(pool_mutex);
        if (!pool.empty()) {
          engine = std::move(pool.back());
          pool.pop_back();
        }
      }
      if (!engine) engine = std::make_unique<SignatureEngine>(family, st.prefix, group);
      for (std::int64_t m = b; m < e; ++m) {
        for (std::int64_t k = m == 0 ? 1 : -M; k <= M; ++k) {
          const std::size_t i = table.index(m, k);
          if (next[i]) continue;
          ++evaluated[static_cast<std::size_t>(m)];
          if (engine->reaches(m, k, r, n)) {
            next[i] = 2;
            next[table.index(-m, -k)] = 2;
            added[static_cast<std::size_t>(m)] += 2;
          }
        }
      }
      std::lock_guard<std::mutex> lock(pool_mutex);
      pool.push_back(std::move(engine));
    });
    for (std::int64_t m = 0; m <= M; ++m) {
      st.evaluated += evaluated[static_cast<std::size_t>(m)];
      st.from_defect += added[static_cast<std::size_t>(m)];
    }

    prev_count = 0;
    for (std::size_t i = 0; i < cells; ++i) {
      if (!next[i]) continue;
      next[i] = 1;
      ++prev_count;
      if (i != origin && table.levels_[i] == unset) table.levels_[i] = static_cast<std::uint8_t>(n);
    }
    std::swap(prev, next);
    std::fill(next.begin(), next.end(), 0);
    st.omega = prev_count - 1;
    table.stats_.push_back(st);
    if (progress) progress(st);
  }
  return table;
}

/// zeta(y) = average of zeta_0(y), ..., zeta_{l(y)-1}(y) with zeta_0 := zeta_1.
inline GroupMeasure zeta(const LatticeVector& y, const LevelTable& table) {
  if (y.is_zero()) throw std::domain_error("zeta undefined at y = 0");
  const std::int64_t M = table.radius();
  if (abs_of(y.m) > M || abs_of(y.n) > M) throw std::domain_error("level unknown: point outside the window");
  const int l = table.level(from_big<long long>(y.m), from_big<long long>(y.n));
  if (l > table.n_max()) throw std::domain_error("level unknown: point beyond the table");
  std::vector<GroupMeasure> terms;
  for (int k = 0; k < l; ++k) terms.push_back(zeta_n(y, prefix_for_level(k, table.schedule()), table.family()));
  return average(terms);
}

/// || g zeta(y) - zeta(g y) || + || zeta(x + y + x') - zeta(y) ||.
inline Rational epsilon(const GroupElement& g, const LatticeVector& x, const LatticeVector& x1, const LatticeVector& y,
                        const LevelTable& table) {
  auto zy = zeta(y, table);
  return l1_distance(translate(g, zy), zeta(act_lattice(g, y), table)) + l1_distance(zeta(x + y + x1, table), zy);
}

struct StructureReport {
  std::int64_t points = 0;      // interior points with l(y) > 1
  std::int64_t checks = 0;      // (y, n) pairs with l(y) > n tested
  std::int64_t violations = 0;  // pair defect >= 1/n for some (g, x, x') in E_1 x F_1 x F_1
  std::int64_t asymmetric = 0;  // y with l(-y) != l(y)
  std::optional<std::array<std::int64_t, 3>> first;  // m, n, level
};

/// Recomputes, for every interior y and every 1 <= n < l(y), the maximum
/// pair defect over E_1 x F_1 x F_1 and checks that it stays below 1/n.
/// l is symmetric under y -> -y (checked), so the half window m > 0 or
/// (m = 0, n > 0) covers everything.
inline StructureReport check_structure(const LevelTable& table, unsigned jobs = 1) {
  const std::int64_t R = table.radius() - table.margin();
  const int n_max = table.n_max();
  const auto e1 = small_ball(1);
  StructureReport total;
  if (R < 1) return total;
  total = parallel_reduce(
      R + 1, 32, jobs, StructureReport{},
      [&](std::int64_t b, std::int64_t e) {
        StructureReport part;
        std::vector<std::unique_ptr<SignatureEngine>> engines(static_cast<std::size_t>(n_max + 1));
        for (std::int64_t m = b; m < e; ++m) {
          for (std::int64_t k = m == 0 ? 1 : -R; k <= R; ++k) {
            const int l = table.level(m, k);
            if (table.level(-m, -k) != l) ++part.asymmetric;
            if (l <= 1) continue;
            part.points += 2;
            for (int n = 1; n < l && n <= n_max; ++n) {
              auto& engine = engines[static_cast<std::size_t>(n)];
              if (!engine)
                engine = std::make_unique<SignatureEngine>(table.family(), prefix_for_level(n, table.schedule()), e1);
              part.checks += 2;
              if (engine->reaches(m, k, 2, n)) {
                if (part.violations == 0) part.first = std::array<std::int64_t, 3>{m, k, n};
                part.violations += 2;
              }
            }
          }
        }
        return part;
      },
      [](StructureReport x, const StructureReport& y) {
        if (!x.first) x.first = y.first;
        x.points += y.points;
        x.checks += y.checks;
        x.violations += y.violations;
        x.asymmetric += y.asymmetric;
        return x;
      });
  return total;
}

struct LevelShiftReport {
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  std::int64_t outside = 0;  // images g y outside the window, not comparable
  std::optional<std::array<std::int64_t, 4>> first;  // y_m, y_n, image_m, image_n
};

/// |l(g y) - l(y)| <= 1 and |l(y + a) - l(y)| <= 1 for interior y with
/// l(y) > 1, g in E_1 and a in box(2); beyond-table levels count as n_max + 1.
inline LevelShiftReport check_level_shift(const LevelTable& table, unsigned jobs = 1) {
  const std::int64_t R = table.radius() - table.margin();
  const auto e1 = small_ball(1);
  if (R < 1) return {};
  return parallel_reduce(
      2 * R + 1, 32, jobs, LevelShiftReport{},
      [&](std::int64_t b, std::int64_t e) {
        LevelShiftReport part;
        auto compare = [&](std::int64_t m, std::int64_t k, int l, std::int64_t zm, std::int64_t zk) {
          if (zm == 0 && zk == 0) return;
          if (!table.in_window(zm, zk)) {
            ++part.outside;
            return;
          }
          ++part.checks;
          const int lz = table.level(zm, zk);
          if (lz > l + 1 || lz < l - 1) {
            if (part.violations == 0) part.first = std::array<std::int64_t, 4>{m, k, zm, zk};
            ++part.violations;
          }
        };
        for (std::int64_t row = b; row < e; ++row) {
          const std::int64_t m = row - R;
          for (std::int64_t k = -R; k <= R; ++k) {
            if (m == 0 && k == 0) continue;
            const int l = table.level(m, k);
            if (l <= 1) continue;
            for (const auto& g : e1)
              compare(m, k, l, g.a().value() * m + g.b().value() * k, g.c().value() * m + g.d().value() * k);
            for (std::int64_t a1 = -2; a1 <= 2; ++a1)
              for (std::int64_t a2 = -2; a2 <= 2; ++a2) compare(m, k, l, m + a1, k + a2);
          }
        }
        return part;
      },
      [](LevelShiftReport x, const LevelShiftReport& y) {
        if (!x.first) x.first = y.first;
        x.checks += y.checks;
        x.violations += y.violations;
        x.outside += y.outside;
        return x;
      });
}

// ---------------------------------------------------------------------------
// Cohort scan of epsilon. All zeta weights are integers over one common
// denominator, so every epsilon value is an int64 numerator over it.

namespace detail {

inline std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  checked_int64 r = checked_int64(a / g) * checked_int64(b);
  if (r.value() > (std::int64_t(1) << 59)) throw std::overflow_error("common denominator too large");
  return r.value();
}

/// Common denominator of every zeta weight for the table's family and scale.
inline std::int64_t zeta_denominator(const LevelTable& table) {
  std::int64_t d = 1;
  for (int L = 1; L <= table.n_max(); ++L) d = lcm_checked(d, L);
  for (int n = 1; n <= table.n_max(); ++n) {
    const auto s = static_cast<std::int64_t>(prefix_for_level(n, table.schedule()));
    switch (table.family()) {
      case WalkVariant::symmetrized: d = lcm_checked(d, 2 * s); break;
      case WalkVariant::tails: d = lcm_checked(d, s); break;
      case WalkVariant::naive:
        for (std::int64_t t = 1; t <= s; ++t) d = lcm_checked(d, t);
        break;
    }
  }
  return d;
}

using Weighted = std::vector<std::pair<Key, std::int64_t>>;

inline std::int64_t l1_weighted(const Weighted& x, const Weighted& y) {
  std::int64_t sum = 0;
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      sum += x[i++].second;
    } else if (i == x.size() || y[j].first < x[i].first) {
      sum += y[j++].second;
    } else {
      const std::int64_t d = x[i++].second - y[j++].second;
      sum += d < 0 ? -d : d;
    }
  }
  return sum;
}

// Memoized zeta measures and defects for one worker.
class ZetaMemo {
 public:
  ZetaMemo(const LevelTable& table, std::int64_t denominator, const std::vector<SmallElement>& group,
           std::size_t max_atoms = std::size_t(1) << 22)
      : table_(table), denominator_(denominator), group_(group), max_atoms_(max_atoms) {
    for (int n = 1; n <= table.n_max(); ++n)
      engines_.push_back(
          std::make_unique<SignatureEngine>(table.family(), prefix_for_level(n, table.schedule()), std::vector<SmallElement>{}));
  }

  void maybe_reset() {
    std::size_t atoms = stored_atoms_;
    for (const auto& e : engines_) atoms += e->stored_keys();
    if (atoms <= max_atoms_) return;
    for (auto& e : engines_) e->reset();
    ids_.clear();
    zetas_.clear();
    group_memo_.clear();
    shift_memo_.clear();
    stored_atoms_ = 0;
    ++epoch_;
  }

  [[nodiscard]] std::uint32_t epoch() const { return epoch_; }

  /// Id of zeta(y); y must have a known level.
  std::uint32_t zeta_id(std::int64_t m, std::int64_t n, int level) {
    std::int64_t g = std::gcd(m, n);
    std::int64_t p = m / g, q = n / g;
    if (q < 0 || (q == 0 && p < 0)) p = -p, q = -q;
    key_.clear();
    key_.push_back(level);
    const int top = std::max(level - 1, 1);
    for (int k = 1; k <= top; ++k) key_.push_back(engines_[static_cast<std::size_t>(k - 1)]->intern(p, q));
    if (auto it = ids_.find(key_); it != ids_.end()) return it->second;
    Weighted w;
    for (int k = 0; k < level; ++k) {
      const int n_k = std::max(k, 1);
      auto& engine = *engines_[static_cast<std::size_t>(n_k - 1)];
      const auto& mu = engine.measure(static_cast<std::uint32_t>(key_[static_cast<std::size_t>(n_k)]));
      const std::int64_t factor = denominator_ / (level * mu.total);
      for (const auto& key : mu.keys) w.emplace_back(key, factor);
    }
    merge(w);
    stored_atoms_ += w.size();
    auto id = static_cast<std::uint32_t>(zetas_.size());
    zetas_.push_back(std::move(w));
    ids_.emplace(key_, id);
    return id;
  }

  /// || g zeta(y) - zeta(g y) || as a numerator over the denominator.
  std::int64_t group_defect(std::size_t gi, std::uint32_t zy, std::uint32_t zgy) {
    const std::uint64_t key = (static_cast<std::uint64_t>(gi) << 56) ^ (static_cast<std::uint64_t>(zy) << 28) ^ zgy;
    if (auto it = group_memo_.find(key); it != group_memo_.end())
      for (const auto& [g, a, b, v] : it->second)
        if (g == gi && a == zy && b == zgy) return v;
    Weighted moved;
    moved.reserve(zetas_[zy].size());
    for (const auto& [k, w] : zetas_[zy]) moved.emplace_back(key_of(group_[gi] * element_of(k)), w);
    std::sort(moved.begin(), moved.end());
    const std::int64_t v = l1_weighted(moved, zetas_[zgy]);
    group_memo_[key].push_back({gi, zy, zgy, v});
    return v;
  }

  std::int64_t shift_defect(std::uint32_t a, std::uint32_t b) {
    if (a == b) return 0;
    if (a > b) std::swap(a, b);
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    if (auto it = shift_memo_.find(key); it != shift_memo_.end()) return it->second;
    const std::int64_t v = l1_weighted(zetas_[a], zetas_[b]);
    shift_memo_.emplace(key, v);
    return v;
  }

 private:
  static void merge(Weighted& w) {
    std::sort(w.begin(), w.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (out > 0 && w[out - 1].first == w[i].first)
        w[out - 1].second += w[i].second;
      else
        w[out++] = w[i];
    }
    w.resize(out);
  }

  struct CodeHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
      std::size_t seed = v.size();
      for (auto x : v) hash_combine(seed, std::hash<std::int64_t>{}(x));
      return seed;
    }
  };
  struct GroupEntry {
    std::size_t gi;
    std::uint32_t a, b;
    std::int64_t value;
  };

  const LevelTable& table_;
  std::int64_t denominator_;
  const std::vector<SmallElement>& group_;
  std::size_t max_atoms_;
  std::size_t stored_atoms_ = 0;
  std::uint32_t epoch_ = 0;
  std::vector<std::unique_ptr<SignatureEngine>> engines_;
  std::vector<std::int64_t> key_;
  std::unordered_map<std::vector<std::int64_t>, std::uint32_t, CodeHash> ids_;
  std::vector<Weighted> zetas_;
  std::unordered_map<std::uint64_t, std::vector<GroupEntry>> group_memo_;
  std::unordered_map<std::uint64_t, std::int64_t> shift_memo_;
};

}  // namespace detail

struct CohortStats {
  int level = 0;
  std::int64_t points = 0;    // interior points of this level that were evaluated
  std::int64_t stride = 1;    // 1 = the whole cohort, else every stride-th point
  std::int64_t skipped = 0;   // (y, g) pairs with g y outside the window or beyond the table
  Rational min{0}, median{0}, max{0};  // of max over (g, x, x') of epsilon
  std::int64_t argmax_m = 0, argmax_n = 0;
  std::vector<Rational> triple_max;  // index gi * 25 + (a1 + 2) * 5 + (a2 + 2), a = x + x'
};

struct EpsilonReport {
  std::vector<std::string> group;  // E_1 in the order used by triple_max
  std::vector<CohortStats> cohorts;
};

/// Epsilon over E_1 x F_1 x F_1 (only x + x' in box(2) matters) for each
/// cohort {y interior : l(y) = L}. Levels below `full_from` are sampled so
/// that about `sample_target` points are evaluated; the others are complete.
inline EpsilonReport epsilon_cohorts(const LevelTable& table, unsigned jobs = 1, int full_from = 3,
                                     std::int64_t sample_target = 200000) {
  const std::int64_t R = table.radius() - table.margin();
  const int n_max = table.n_max();
  const auto e1 = small_ball(1);
  const std::size_t G = e1.size();
  constexpr std::size_t A = 25;
  const std::int64_t den = detail::zeta_denominator(table);
  EpsilonReport report;
  for (const auto& g : enumerate_E(1)) report.group.push_back(g.text());
  if (R < 1) return report;

  const auto hist = table.histogram(true);
  std::vector<std::int64_t> stride(static_cast<std::size_t>(n_max + 1), 1);
  for (int L = 1; L <= n_max; ++L)
    if (L < full_from) stride[static_cast<std::size_t>(L)] = std::max<std::int64_t>(1, hist[static_cast<std::size_t>(L)] / 2 / sample_target);

  struct Part {
    std::vector<std::vector<std::int64_t>> values;  // per level: max over triples, per point
    std::vector<std::vector<std::int64_t>> triple;  // per level: G * A maxima, -1 = none
    std::vector<std::int64_t> skipped;
    std::vector<std::array<std::int64_t, 3>> best;  // value, m, n
  };
  auto fresh = [&] {
    Part p;
    p.values.resize(static_cast<std::size_t>(n_max + 1));
    p.triple.assign(static_cast<std::size_t>(n_max + 1), std::vector<std::int64_t>(G * A, -1));
    p.skipped.assign(static_cast<std::size_t>(n_max + 1), 0);
    p.best.assign(static_cast<std::size_t>(n_max + 1), {-1, 0, 0});
    return p;
  };

  std::mutex pool_mutex;
  std::vector<std::unique_ptr<detail::ZetaMemo>> pool;
  const std::int64_t side = table.side();

  auto total = parallel_reduce(
      R + 1, 16, jobs, fresh(),
      [&](std::int64_t b, std::int64_t e) {
        Part part = fresh();
        std::unique_ptr<detail::ZetaMemo> memo;
        {
          std::lock_guard<std::mutex> lock(pool_mutex);
          if (!pool.empty()) {
            memo = std::move(pool.back());
            pool.pop_back();
          }
        }
        if (!memo) memo = std::make_unique<detail::ZetaMemo>(table, den, e1);
        // zeta ids of rows m - 2 .. m + 2, valid for one memo epoch
        struct Cell {
          std::int64_t row = std::numeric_limits<std::int64_t>::min();
          std::uint32_t epoch = 0, id = 0;
        };
        std::vector<Cell> ring(static_cast<std::size_t>(5 * side));
        auto cell_id = [&](std::int64_t m, std::int64_t k) {
          auto& c = ring[static_cast<std::size_t>(((m % 5 + 5) % 5) * side + (k + table.radius()))];
          if (c.row != m || c.epoch != memo->epoch()) c = {m, memo->epoch(), memo->zeta_id(m, k, table.level(m, k))};
          return c.id;
        };
        std::int64_t G_val[64];
        std::int64_t H_val[A];
        for (std::int64_t m = b; m < e; ++m) {
          memo->maybe_reset();
          for (std::int64_t k = m == 0 ? 1 : -R; k <= R; ++k) {
            const int L = table.level(m, k);
            if (L > n_max) continue;
            const std::int64_t st = stride[static_cast<std::size_t>(L)];
            if (st > 1 && ((m + R) * side + (k + R)) % st != 0) continue;
            const auto li = static_cast<std::size_t>(L);
            const std::uint32_t zy = cell_id(m, k);
            std::int64_t g_best = -1;
            for (std::size_t gi = 0; gi < G; ++gi) {
              const auto& g = e1[gi];
              const std::int64_t gm = g.a().value() * m + g.b().value() * k;
              const std::int64_t gk = g.c().value() * m + g.d().value() * k;
              G_val[gi] = -1;
              if (!table.in_window(gm, gk) || !table.known(gm, gk)) {
                part.skipped[li] += 2;
                continue;
              }
              G_val[gi] = memo->group_defect(gi, zy, memo->zeta_id(gm, gk, table.level(gm, gk)));
              g_best = std::max(g_best, G_val[gi]);
            }
            std::int64_t h_best = -1;
            for (std::int64_t a1 = -2; a1 <= 2; ++a1)
              for (std::int64_t a2 = -2; a2 <= 2; ++a2) {
                const auto ai = static_cast<std::size_t>((a1 + 2) * 5 + (a2 + 2));
                H_val[ai] = -1;
                const std::int64_t zm = m + a1, zk = k + a2;
                if ((zm == 0 && zk == 0) || !table.known(zm, zk)) continue;
                H_val[ai] = memo->shift_defect(zy, cell_id(zm, zk));
                h_best = std::max(h_best, H_val[ai]);
              }
            if (g_best < 0 || h_best < 0) continue;
            // -y has the same group part and the mirrored shift part
            auto& tri = part.triple[li];
            for (std::size_t gi = 0; gi < G; ++gi) {
              if (G_val[gi] < 0) continue;
              for (std::size_t ai = 0; ai < A; ++ai) {
                const std::int64_t h = std::max(H_val[ai], H_val[A - 1 - ai]);
                if (h < 0) continue;
                tri[gi * A + ai] = std::max(tri[gi * A + ai], G_val[gi] + h);
              }
            }
            const std::int64_t v = g_best + h_best;
            part.values[li].push_back(v);
            if (v > part.best[li][0]) part.best[li] = {v, m, k};
          }
        }
        std::lock_guard<std::mutex> lock(pool_mutex);
        pool.push_back(std::move(memo));
        return part;
      },
      [&](Part x, Part&& y) {
        for (int L = 0; L <= n_max; ++L) {
          const auto li = static_cast<std::size_t>(L);
          x.values[li].insert(x.values[li].end(), y.values[li].begin(), y.values[li].end());
          for (std::size_t i = 0; i < G * A; ++i) x.triple[li][i] = std::max(x.triple[li][i], y.triple[li][i]);
          x.skipped[li] += y.skipped[li];
          if (y.best[li][0] > x.best[li][0]) x.best[li] = y.best[li];
        }
        return x;
      });

  for (int L = 1; L <= n_max; ++L) {
    const auto li = static_cast<std::size_t>(L);
    auto& vals = total.values[li];
    if (vals.empty()) continue;
    CohortStats c;
    c.level = L;
    c.points = 2 * static_cast<std::int64_t>(vals.size());
    c.stride = stride[li];
    c.skipped = total.skipped[li];
    std::sort(vals.begin(), vals.end());
    auto frac = [&](std::int64_t v) { return Rational(BigInt(v), BigInt(den)); };
    c.min = frac(vals.front());
    c.max = frac(vals.back());
    // lower median of the full (doubled) cohort
    c.median = frac(vals[(vals.size() - 1) / 2]);
    c.argmax_m = total.best[li][1];
    c.argmax_n = total.best[li][2];
    for (auto v : total.triple[li]) c.triple_max.push_back(v < 0 ? Rational(0) : frac(v));
    report.cohorts.push_back(std::move(c));
  }
  return report;
}

}  // namespace corona
