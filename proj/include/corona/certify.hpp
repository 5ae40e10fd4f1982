#pragma once

// The acceptance suite. Each criterion produces a deterministic JSON record
// (no timings, no worker counts) so that whole summaries can be compared
// byte for byte across parallelism settings.

#include "corona/farey_walk.hpp"
#include "corona/group_measure.hpp"
#include "corona/higson.hpp"
#include "corona/modular_group.hpp"
#include "corona/oracles.hpp"
#include "corona/report.hpp"
#include "corona/suites.hpp"
#include "corona/sweep.hpp"
#include "corona/witness.hpp"
#include "corona/zeta_builder.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace corona {

struct CertifyOptions {
  bool quick = false;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::string baseline;    // pinned maxima for criteria 8 and 10; empty = none
  std::ostream* log = nullptr;
  bool determinism = true;  // rerun with another worker count (criterion 11)
  std::string table_out;    // write the criterion 9 level table here
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool ran = true;
  bool pass = false;
  std::string summary;
  Json detail = Json::object();
  double seconds = 0;
  double limit = 0;  // seconds; 0 = none

  static CriterionResult make(int id, std::string title) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    return r;
  }

  [[nodiscard]] bool over_time() const { return ran && limit > 0 && seconds > limit; }
  [[nodiscard]] bool ok() const { return !ran || (pass && !over_time()); }
  [[nodiscard]] const char* status() const { return !ran ? "SKIP" : ok() ? "PASS" : "FAIL"; }
};

struct CertifyReport {
  bool quick = false;
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  [[nodiscard]] bool all_ok() const {
    for (const auto& c : criteria)
      if (!c.ok()) return false;
    return true;
  }
};

namespace detail {

inline void note(const CertifyOptions& o, const std::string& text) {
  if (o.log) *o.log << text << std::endl;
}

/// phi^k >= h, with phi the golden ratio, decided exactly through
/// phi^k = (L_k + F_k sqrt 5) / 2.
inline bool golden_power_reaches(std::int64_t k, std::int64_t h) {
  if (k < 0) return h <= 0;
  std::int64_t f0 = 0, f1 = 1;  // F_k, F_{k+1}
  for (std::int64_t i = 0; i < k; ++i) {
    std::int64_t f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
    if (f0 >= h) return true;  // phi^k > F_k
  }
  const std::int64_t lucas = 2 * f1 - f0;  // L_k = F_{k-1} + F_{k+1} = 2 F_{k+1} - F_k
  const std::int64_t rhs = 2 * h - lucas;
  if (rhs <= 0) return true;
  return 5 * f0 * f0 >= rhs * rhs;
}

inline Json read_baseline(const std::string& path) {
  if (path.empty()) return nullptr;
  std::ifstream in(path);
  if (!in) return nullptr;
  try {
    Json j = Json::parse(in);
    if (j.value("schema", "") != schema_version) return nullptr;
    return j;
  } catch (const nlohmann::json::exception&) {
    return nullptr;
  }
}

// -- 1 ---------------------------------------------------------------------

inline CriterionResult group_exactness(const CertifyOptions& o) {
  auto r = CriterionResult::make(1, "group exactness");
  using G = GroupElement;
  const auto ball = WordBalls(6).ball(6);
  std::mt19937_64 rng(o.seed + 1);
  const auto pick = [&] { return ball[uniform_below(rng, ball.size())].element(); };
  std::int64_t assoc_fail = 0, det_fail = 0, det_checked = 0;
  auto det_ok = [&](const G& g) {
    ++det_checked;
    if (g.determinant() != 1) ++det_fail;
  };
  for (const auto& g : ball) det_ok(g.element());
  for (int i = 0; i < 1000; ++i) {
    G a = pick(), b = pick(), c = pick();
    G left = (a * b) * c, right = a * (b * c);
    if (left != right) ++assoc_fail;
    det_ok(a * b);
    det_ok(left);
  }
  const G minus_one = G::identity().negated();
  const G st = G::S() * G::T();
  const G st3 = st * st * st;
  const bool s2 = G::S() * G::S() == minus_one;
  const bool st3_ok = st3 == minus_one;
  const bool st6 = st3 * st3 == G::identity();
  const bool psl_s2 = PslClass(G::S() * G::S()).is_identity();
  r.pass = assoc_fail == 0 && det_fail == 0 && s2 && st3_ok && st6 && psl_s2;
  r.detail = {{"ball_radius", 6},      {"ball_size", ball.size()}, {"triples", 1000},
              {"associativity_failures", assoc_fail}, {"determinants_checked", det_checked},
              {"determinant_failures", det_fail},    {"S^2=-I", s2}, {"(ST)^3=-I", st3_ok},
              {"(ST)^6=I", st6},                     {"S^2=1 in PSL", psl_s2}};
  r.summary = std::to_string(assoc_fail) + " associativity and " + std::to_string(det_fail) +
              " determinant failures; relations " + (s2 && st3_ok && st6 && psl_s2 ? "hold" : "broken");
  return r;
}

// -- 2 ---------------------------------------------------------------------

inline CriterionResult ball_oracle(const CertifyOptions&) {
  auto r = CriterionResult::make(2, "ball oracle");
  const int R = 8;
  const auto ref = oracle::ball_sizes(R);
  const WordBalls balls(R);
  Json sizes = Json::array();
  bool ok = true;
  for (int k = 0; k <= R; ++k) {
    const auto got = balls.size(k);
    sizes.push_back({{"r", k}, {"size", got}, {"oracle", ref[static_cast<std::size_t>(k)]}});
    if (got != ref[static_cast<std::size_t>(k)]) ok = false;
  }
  if (word_ball(R).size() != ref.back()) ok = false;
  r.pass = ok;
  r.detail = {{"sizes", sizes}};
  r.summary = std::string("|word_ball(r)| for r <= 8 ") + (ok ? "matches" : "differs from") +
              " the breadth-first oracle (|B_8| = " + std::to_string(balls.size(R)) + ")";
  return r;
}

// -- 3 ---------------------------------------------------------------------

inline CriterionResult phi_equivariance(const CertifyOptions& o) {
  auto r = CriterionResult::make(3, "phi equivariance");
  const auto ball = word_ball(3);
  std::vector<SmallElement> group;
  for (const auto& g : ball) group.push_back(convert<checked_int64>(g.element()));
  const std::int64_t bound = 1000000;
  std::mt19937_64 rng(o.seed + 3);
  std::vector<SmallVector> points;
  while (points.size() < 10000) {
    auto m = static_cast<std::int64_t>(uniform_below(rng, 2 * bound + 1)) - bound;
    auto n = static_cast<std::int64_t>(uniform_below(rng, 2 * bound + 1)) - bound;
    if (m != 0 || n != 0) points.push_back({m, n});
  }
  struct Part {
    std::int64_t checks = 0, failures = 0;
  };
  auto total = parallel_reduce(
      static_cast<std::int64_t>(points.size()), 256, o.jobs, Part{},
      [&](std::int64_t b, std::int64_t e) {
        Part p;
        for (std::int64_t i = b; i < e; ++i)
          for (const auto& g : group) {
            ++p.checks;
            if (!equivariance_check(g, points[static_cast<std::size_t>(i)])) ++p.failures;
          }
        return p;
      },
      [](Part x, const Part& y) { return Part{x.checks + y.checks, x.failures + y.failures}; });
  r.pass = total.failures == 0 && total.checks == static_cast<std::int64_t>(group.size() * points.size());
  r.detail = {{"group_size", group.size()}, {"vectors", points.size()}, {"bound", bound},
              {"checks", total.checks},     {"failures", total.failures}};
  r.summary = std::to_string(total.failures) + " failures in " + std::to_string(total.checks) + " checks";
  return r;
}

// -- 4 ---------------------------------------------------------------------

inline CriterionResult higson_bound(const CertifyOptions& o) {
  auto r = CriterionResult::make(4, "Higson bound");
  const std::int64_t box = o.quick ? 400 : 2000;
  const std::vector<std::int64_t> radii =
      o.quick ? std::vector<std::int64_t>{16, 32, 64, 128} : std::vector<std::int64_t>{64, 128, 256, 512, 1024};
  std::int64_t checked = 0, violations = 0;
  Json ratios = Json::array();
  bool ratio_ok = true;
  Rational worst_ratio = -1;
  for (const auto& a : enumerate_F(2)) {
    auto rep = higson_bound_scan(a, box, o.jobs);
    checked += rep.checked;
    violations += rep.violations;
    if (a.is_zero()) continue;
    auto scan = higson_scan(a, radii, o.jobs);
    for (std::size_t i = 0; i + 1 < scan.size(); ++i) {
      const auto& lo = scan[i];
      const auto& hi = scan[i + 1];
      bool ok = hi.max_dev_sq > 0 && lo.max_dev_sq >= 2 * hi.max_dev_sq;
      if (!ok) ratio_ok = false;
      if (hi.max_dev_sq > 0) {
        Rational q = lo.max_dev_sq / hi.max_dev_sq;
        if (worst_ratio < 0 || q < worst_ratio) worst_ratio = q;
      }
      ratios.push_back({{"a", vector_text(a)}, {"R", lo.radius}, {"max_R", rational_text(lo.max_dev_sq)},
                        {"max_2R", rational_text(hi.max_dev_sq)}, {"ratio_at_least_2", ok}});
    }
  }
  r.pass = violations == 0 && ratio_ok;
  r.detail = {{"box", box},         {"shifts", 25},          {"checked", checked},
              {"violations", violations}, {"radii", radii}, {"min_ratio", rational_text(worst_ratio)},
              {"annuli", ratios}};
  r.summary = std::to_string(violations) + " bound violations in " + std::to_string(checked) +
              " checks; smallest max(R)/max(2R) = " + rational_text(worst_ratio);
  return r;
}

// -- 5 ---------------------------------------------------------------------

inline CriterionResult measure_calculus(const CertifyOptions& o) {
  auto r = CriterionResult::make(5, "measure calculus");
  const auto ball = WordBalls(4).ball(4);
  std::mt19937_64 rng(o.seed + 5);
  auto random_measure = [&] {
    const std::size_t k = 1 + uniform_below(rng, 6);
    std::vector<std::uint64_t> w(k);
    std::uint64_t sum = 0;
    for (auto& x : w) sum += (x = 1 + uniform_below(rng, 9));
    std::vector<std::pair<PslClass, Rational>> weights;
    for (std::size_t i = 0; i < k; ++i)
      weights.emplace_back(ball[uniform_below(rng, ball.size())], Rational(BigInt(w[i]), BigInt(sum)));
    return GroupMeasure::from_weights(weights);
  };
  std::int64_t isometry_fail = 0, mass_fail = 0, range_fail = 0;
  for (int i = 0; i < 500; ++i) {
    const auto g = ball[uniform_below(rng, ball.size())];
    const auto mu = random_measure(), nu = random_measure();
    const auto gmu = translate(g, mu), gnu = translate(g, nu);
    const Rational d = l1_distance(mu, nu);
    if (l1_distance(gmu, gnu) != d) ++isometry_fail;
    if (mu.mass() != 1 || nu.mass() != 1 || gmu.mass() != 1 || gnu.mass() != 1) ++mass_fail;
    if (d < 0 || d > 2 || l1_distance(mu, mu) != 0) ++range_fail;
  }
  r.pass = isometry_fail == 0 && mass_fail == 0 && range_fail == 0;
  r.detail = {{"cases", 500},
              {"isometry_failures", isometry_fail},
              {"mass_failures", mass_fail},
              {"range_failures", range_fail}};
  r.summary = std::to_string(isometry_fail + mass_fail + range_fail) + " failures in 500 cases";
  return r;
}

// -- 6 ---------------------------------------------------------------------

inline CriterionResult walk_oracle(const CertifyOptions& o) {
  auto r = CriterionResult::make(6, "walk oracle");
  const std::int64_t B = o.quick ? 60 : 200;
  const std::int64_t D = o.quick ? 120 : 500;
  struct Part {
    std::int64_t fractions = 0, path_fail = 0, cross_checks = 0, cross_fail = 0, depth_checks = 0, depth_fail = 0;
    std::optional<std::pair<std::int64_t, std::int64_t>> first;
  };
  auto fold = [](Part x, const Part& y) {
    if (!x.first && y.first) x.first = y.first;
    x.fractions += y.fractions;
    x.path_fail += y.path_fail;
    x.cross_checks += y.cross_checks;
    x.cross_fail += y.cross_fail;
    x.depth_checks += y.depth_checks;
    x.depth_fail += y.depth_fail;
    return x;
  };
  using SE = SmallElement;
  auto cross_one = [](const SE& w) { return abs_of(w.a() * w.d() - w.b() * w.c()) == 1; };
  auto shares_column = [](const SE& x, const SE& y) {
    auto col = [](const SE& w, int j) {
      return j == 0 ? std::pair{w.a(), w.c()} : std::pair{w.b(), w.d()};
    };
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        auto [p, q] = col(x, i);
        auto [s, t] = col(y, j);
        if ((p == s && q == t) || (p == -s && q == -t)) return true;
      }
    return false;
  };

  // mediant phase against the Stern-Brocot oracle, and the Farey property of
  // every edge the walk visits
  auto paths = parallel_reduce(
      B, 8, o.jobs, Part{},
      [&](std::int64_t b, std::int64_t e) {
        Part p;
        for (std::int64_t q = b + 1; q <= e; ++q)
          for (std::int64_t a = -B; a <= B; ++a) {
            if (a == 0 || std::gcd(a, q) != 1) continue;
            ++p.fractions;
            const auto t = SmallPoint::normalize(checked_int64(a), checked_int64(q));
            const auto ref = oracle::stern_brocot_path(a, q);
            const auto got = mediant_vertices(t);
            bool same = got.size() == ref.size();
            for (std::size_t i = 0; same && i < got.size(); ++i)
              same = got[i] == SmallPoint::normalize(checked_int64(ref[i].first), checked_int64(ref[i].second));
            if (!same) {
              ++p.path_fail;
              if (!p.first) p.first = {a, q};
            }
            const auto word = walk_word(t);
            SE w = word.base();
            ++p.cross_checks;
            if (!cross_one(w)) ++p.cross_fail;
            for (const auto& run : word.mediant)
              for (std::int64_t i = 0; i < run.count.value(); ++i) {
                SE next = times_move(w, run.move);
                p.cross_checks += 2;
                if (!cross_one(next)) ++p.cross_fail;
                if (!shares_column(w, next)) ++p.cross_fail;
                w = next;
              }
            basic_walk_stream<checked_int64> stream(t, WalkVariant::tails);
            SE prev = stream.next().element();
            for (std::int64_t i = 0; i < word.depth.value() + 4; ++i) {
              SE cur = stream.next().element();
              p.cross_checks += 2;
              if (!cross_one(cur)) ++p.cross_fail;
              if (!shares_column(prev, cur)) ++p.cross_fail;
              prev = cur;
            }
          }
        return p;
      },
      fold);

  // depth >= log_phi(height) - 2 for every reduced p/q with q <= D, |p| <= D
  auto depths = parallel_reduce(
      D, 8, o.jobs, Part{},
      [&](std::int64_t b, std::int64_t e) {
        Part p;
        for (std::int64_t q = b + 1; q <= e; ++q)
          for (std::int64_t a = -D; a <= D; ++a) {
            if (std::gcd(a, q) != 1) continue;
            ++p.depth_checks;
            const auto t = SmallPoint::normalize(checked_int64(a), checked_int64(q));
            const std::int64_t h = std::max(a < 0 ? -a : a, q);
            if (!golden_power_reaches(depth(t).value() + 2, h)) {
              ++p.depth_fail;
              if (!p.first) p.first = {a, q};
            }
          }
        return p;
      },
      fold);

  r.pass = paths.path_fail == 0 && paths.cross_fail == 0 && depths.depth_fail == 0;
  r.detail = {{"numerator_denominator_bound", B}, {"fractions", paths.fractions},
              {"path_mismatches", paths.path_fail}, {"edge_checks", paths.cross_checks},
              {"edge_failures", paths.cross_fail}, {"depth_denominator_bound", D},
              {"depth_checks", depths.depth_checks}, {"depth_failures", depths.depth_fail}};
  r.summary = std::to_string(paths.path_fail) + " path mismatches over " + std::to_string(paths.fractions) +
              " fractions, " + std::to_string(paths.cross_fail) + " edge failures, " +
              std::to_string(depths.depth_fail) + " depth bound failures over " + std::to_string(depths.depth_checks);
  return r;
}

// -- 7 / 8 -----------------------------------------------------------------

inline const std::vector<std::uint64_t>& sweep_prefixes() {
  static const std::vector<std::uint64_t> ns{4, 8, 16, 32, 64};
  return ns;
}

struct DecayRun {
  std::vector<SweepMax> maxima;
  Json per_suite = Json::array();
  DecayVerdict verdict;
};

inline DecayRun decay_run(const std::vector<Suite>& suites, WalkVariant family, const CertifyOptions& o) {
  DecayRun run;
  for (auto n : sweep_prefixes()) {
    SweepMax all;
    all.n = n;
    Json row;
    row["n"] = n;
    for (const auto& s : suites) {
      auto m = sweep_max({s}, n, family, o.jobs);
      row[s.name] = rational_text(m.max);
      all.points += m.points;
      all.wide += m.wide;
      if (!all.argmax || m.max > all.max) {
        all.max = m.max;
        all.argmax = m.argmax;
      }
    }
    run.per_suite.push_back(row);
    note(o, std::string("    ") + variant_name(family) + " n=" + std::to_string(n) + " max " + rational_text(all.max));
    run.maxima.push_back(std::move(all));
  }
  run.verdict = decay_verdict(run.maxima, 8);
  return run;
}

inline Json decay_json(const DecayRun& run) {
  Json maxima = Json::array();
  for (const auto& m : run.maxima) maxima.push_back(sweep_max_json(m));
  return {{"maxima", maxima},
          {"per_suite", run.per_suite},
          {"non_increasing", run.verdict.non_increasing},
          {"n64_at_most_half_n8", run.verdict.halved}};
}

inline CriterionResult negative_control(const CertifyOptions& o) {
  auto r = CriterionResult::make(7, "negative control");
  const auto fam = WalkVariant::naive;
  const LatticeVector y{BigInt(1000000), BigInt(0)};
  const Rational value =
      pair_defect(GroupElement::identity(), LatticeVector{BigInt(0), BigInt(1)}, LatticeVector{}, y, 8, fam);
  const bool exact = value == Rational(7, 4);
  auto run = decay_run({axis_suite()}, fam, o);
  const bool decays = run.verdict.decays();
  r.pass = exact && !decays;
  r.detail = {{"family", "naive"},
              {"suite", "axis"},
              {"pair_defect_at_1e6", rational_text(value)},
              {"expected", "7/4"},
              {"decay", decay_json(run)},
              {"reported", decays ? "decaying" : "non-decaying"}};
  r.summary = "pair_defect(1, (0,1), 0, (10^6,0), 8) = " + rational_text(value) + "; naive family reported " +
              (decays ? "decaying" : "non-decaying") + " (max " + rational_text(run.maxima.front().max) +
              " at n=4, " + rational_text(run.maxima.back().max) + " at n=64)";
  return r;
}

inline CriterionResult candidate_decay(const CertifyOptions& o, const Json& baseline) {
  auto r = CriterionResult::make(8, "candidate-family decay");
  if (o.quick) {
    r.ran = false;
    r.summary = "measured criterion, not part of the quick suite";
    return r;
  }
  std::vector<Suite> suites{axis_suite(), ray_suite(), generic_suite(o.seed), cf_bounded_suite(o.seed)};
  auto run = decay_run(suites, WalkVariant::symmetrized, o);
  Json regressions = Json::array();
  bool have_baseline = false;
  if (!baseline.is_null() && baseline.contains("decay") && baseline["decay"].value("seed", std::uint64_t(0)) == o.seed) {
    have_baseline = true;
    const auto& pinned = baseline["decay"]["max"];
    for (const auto& m : run.maxima) {
      const std::string key = std::to_string(m.n);
      if (!pinned.contains(key) || m.max > parse_rational(pinned[key].get<std::string>()))
        regressions.push_back({{"n", m.n}, {"max", rational_text(m.max)}});
    }
  }
  r.pass = run.verdict.decays() && have_baseline && regressions.empty();
  r.detail = decay_json(run);
  r.detail["family"] = "symmetrized";
  r.detail["suites"] = {"axis", "ray", "generic", "cf-bounded"};
  r.detail["baseline"] = have_baseline;
  r.detail["regressions"] = regressions;
  std::string seq;
  for (const auto& m : run.maxima) seq += (seq.empty() ? "" : ", ") + rational_text(m.max);
  r.summary = "max pair defect at n = 4..64: " + seq + "; non-increasing " +
              (run.verdict.non_increasing ? "yes" : "no") + ", n=64 <= n=8 / 2 " + (run.verdict.halved ? "yes" : "no") +
              (have_baseline ? ", " + std::to_string(regressions.size()) + " regressions" : ", no baseline");
  return r;
}

// -- 9 / 10 ----------------------------------------------------------------

inline CriterionResult leveling_structure(const CertifyOptions& o, std::optional<LevelTable>& table) {
  auto r = CriterionResult::make(9, "leveling structure");
  const std::int64_t M = o.quick ? 256 : 4096;
  const int n_max = o.quick ? 4 : 8;
  const auto margin = default_margin(n_max);
  table = build_levels(M, n_max, WalkVariant::symmetrized, Schedule::quadratic, margin, o.jobs,
                       [&](const LevelStats& s) {
                         note(o, "    level " + std::to_string(s.n) + ": |Omega| = " + std::to_string(s.omega) +
                                     (s.saturated ? " (saturated)" : ""));
                       });
  if (!o.table_out.empty()) {
    std::ofstream out(o.table_out);
    if (!out) throw std::runtime_error("cannot write " + o.table_out);
    table->write(out);
  }
  auto st = check_structure(*table, o.jobs);
  note(o, "    structure: " + std::to_string(st.checks) + " checks");
  auto ls = check_level_shift(*table, o.jobs);
  r.pass = st.violations == 0 && st.asymmetric == 0 && ls.violations == 0 && st.checks > 0 && ls.checks > 0;
  r.detail = table_json(*table);
  r.detail["structure"] = {{"points", st.points},
                           {"checks", st.checks},
                           {"violations", st.violations},
                           {"asymmetric", st.asymmetric}};
  if (st.first) r.detail["structure"]["first_violation"] = *st.first;
  r.detail["level_shift"] = {{"checks", ls.checks}, {"violations", ls.violations}, {"outside", ls.outside}};
  if (ls.first) r.detail["level_shift"]["first_violation"] = *ls.first;
  r.summary = "M=" + std::to_string(M) + " n_max=" + std::to_string(n_max) + ": " + std::to_string(st.violations) +
              " defect violations in " + std::to_string(st.checks) + " checks, " + std::to_string(ls.violations) +
              " level-shift violations in " + std::to_string(ls.checks) + ", table " + table->digest();
  return r;
}

inline CriterionResult defect_trend(const CertifyOptions& o, const std::optional<LevelTable>& table,
                                    const Json& baseline) {
  auto r = CriterionResult::make(10, "final defect trend");
  if (o.quick) {
    r.ran = false;
    r.summary = "measured criterion, not part of the quick suite";
    return r;
  }
  if (!table) {
    r.summary = "no level table";
    return r;
  }
  auto rep = epsilon_cohorts(*table, o.jobs);
  std::vector<const CohortStats*> tail;
  for (const auto& c : rep.cohorts)
    if (c.level >= 3 && c.points > 0) tail.push_back(&c);
  bool non_increasing = true, halved = false;
  for (std::size_t i = 1; i < tail.size(); ++i)
    if (tail[i]->max > tail[i - 1]->max) non_increasing = false;
  if (tail.size() >= 2) halved = 2 * tail.back()->max <= tail.front()->max;

  // per fixed triple (g, x + x'), the same two tests
  const std::size_t triples = rep.group.size() * 25;
  std::int64_t triple_pass = 0, triple_seen = 0;
  for (std::size_t k = 0; k < triples; ++k) {
    std::vector<Rational> seq;
    for (const auto* c : tail)
      if (c->triple_max[k] >= 0) seq.push_back(c->triple_max[k]);
    if (seq.size() < 2 || seq.front() == 0) continue;
    ++triple_seen;
    bool ok = 2 * seq.back() <= seq.front();
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (seq[i] > seq[i - 1]) ok = false;
    if (ok) ++triple_pass;
  }

  Json regressions = Json::array();
  bool have_baseline = false;
  if (!baseline.is_null() && baseline.contains("cohorts") &&
      baseline["cohorts"].value("window", std::int64_t(0)) == table->radius() &&
      baseline["cohorts"].value("nmax", 0) == table->n_max()) {
    have_baseline = true;
    const auto& pinned = baseline["cohorts"]["max"];
    for (const auto& c : rep.cohorts) {
      const std::string key = std::to_string(c.level);
      if (c.points == 0) continue;
      if (!pinned.contains(key) || c.max > parse_rational(pinned[key].get<std::string>()))
        regressions.push_back({{"level", c.level}, {"max", rational_text(c.max)}});
    }
  }
  r.pass = tail.size() >= 2 && non_increasing && halved && have_baseline && regressions.empty();
  r.detail = {{"group", rep.group},
              {"cohorts", cohorts_json(rep)},
              {"non_increasing", non_increasing},
              {"last_at_most_half_first", halved},
              {"triples_tested", triple_seen},
              {"triples_decaying", triple_pass},
              {"baseline", have_baseline},
              {"regressions", regressions}};
  std::string seq;
  for (const auto* c : tail) seq += (seq.empty() ? "" : ", ") + std::to_string(c->level) + ": " + rational_text(c->max);
  r.summary = "cohort maxima for L >= 3 (" + seq + "); non-increasing " + (non_increasing ? "yes" : "no") +
              ", last <= first / 2 " + (halved ? "yes" : "no") + "; " + std::to_string(triple_pass) + " of " +
              std::to_string(triple_seen) + " fixed triples decay" +
              (have_baseline ? ", " + std::to_string(regressions.size()) + " regressions" : ", no baseline");
  return r;
}

inline CriterionResult timed(const CertifyOptions& o, double limit, const std::function<CriterionResult()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r = body();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.limit = limit;
  if (o.log) {
    std::ostringstream line;
    line << std::fixed << std::setprecision(1) << "[" << r.id << "] " << r.status() << "  " << r.title << "  ("
         << r.seconds << " s)";
    *o.log << line.str() << std::endl;
  }
  return r;
}

}  // namespace detail

/// Criteria 1 to 10.
inline std::vector<CriterionResult> run_criteria(const CertifyOptions& o) {
  using namespace detail;
  const Json baseline = read_baseline(o.baseline);
  std::vector<CriterionResult> out;
  out.push_back(timed(o, 5, [&] { return group_exactness(o); }));
  out.push_back(timed(o, 30, [&] { return ball_oracle(o); }));
  out.push_back(timed(o, 30, [&] { return phi_equivariance(o); }));
  out.push_back(timed(o, 120, [&] { return higson_bound(o); }));
  out.push_back(timed(o, 5, [&] { return measure_calculus(o); }));
  out.push_back(timed(o, 120, [&] { return walk_oracle(o); }));
  out.push_back(timed(o, 60, [&] { return negative_control(o); }));
  out.push_back(timed(o, 600, [&] { return candidate_decay(o, baseline); }));
  std::optional<LevelTable> table;
  out.push_back(timed(o, 900, [&] { return leveling_structure(o, table); }));
  out.push_back(timed(o, 300, [&] { return defect_trend(o, table, baseline); }));
  return out;
}

/// The deterministic summary: everything except timings and worker counts.
inline Json summary_json(const std::vector<CriterionResult>& criteria, bool quick, std::uint64_t seed) {
  Json doc = json_document("certify");
  doc["mode"] = quick ? "quick" : "full";
  doc["seed"] = seed;
  Json list = Json::array();
  for (const auto& c : criteria) {
    Json j;
    j["id"] = c.id;
    j["title"] = c.title;
    j["status"] = !c.ran ? "skipped" : c.pass ? "pass" : "fail";
    j["summary"] = c.summary;
    j["detail"] = c.detail;
    list.push_back(j);
  }
  doc["criteria"] = list;
  return doc;
}

/// Runs the suite; criterion 11 reruns criteria 1 to 10 with a different
/// worker count (1 and 8 by default) and compares the summaries byte for byte.
inline CertifyReport certify(const CertifyOptions& o) {
  CertifyReport report;
  report.quick = o.quick;
  report.seed = o.seed;
  detail::note(o, std::string("certify (") + (o.quick ? "quick" : "full") + ", " + std::to_string(o.jobs) +
                      (o.jobs == 1 ? " worker)" : " workers)"));
  report.criteria = run_criteria(o);
  auto det = CriterionResult::make(11, "determinism");
  if (!o.determinism) {
    det.ran = false;
    det.summary = "disabled";
  } else {
    det = detail::timed(o, 0, [&] {
      auto r = CriterionResult::make(11, "determinism");
      CertifyOptions other = o;
      other.jobs = o.jobs == 1 ? 8 : 1;
      other.table_out.clear();
      detail::note(o, "  rerun with " + std::to_string(other.jobs) + " workers");
      const std::string a = summary_json(report.criteria, o.quick, o.seed).dump(2);
      const std::string b = summary_json(run_criteria(other), o.quick, o.seed).dump(2);
      std::size_t diff = 0;
      while (diff < a.size() && diff < b.size() && a[diff] == b[diff]) ++diff;
      r.pass = a == b;
      r.detail = {{"jobs", {std::min(o.jobs, other.jobs), std::max(o.jobs, other.jobs)}}, {"bytes", a.size()}};
      r.summary = r.pass ? "summaries with " + std::to_string(std::min(o.jobs, other.jobs)) + " and " +
                               std::to_string(std::max(o.jobs, other.jobs)) + " workers are byte-identical (" +
                               std::to_string(a.size()) + " bytes)"
                         : "summaries differ at byte " + std::to_string(diff);
      return r;
    });
  }
  report.criteria.push_back(det);
  return report;
}

inline Json summary_json(const CertifyReport& report) {
  return summary_json(report.criteria, report.quick, report.seed);
}

/// Pinned maxima of criteria 8 and 10, written from a full run.
inline Json baseline_json(const CertifyReport& report) {
  Json doc = json_document("baseline");
  Json window = 0, n_max = 0;
  for (const auto& c : report.criteria)
    if (c.id == 9 && c.ran) {
      window = c.detail["window"];
      n_max = c.detail["nmax"];
    }
  for (const auto& c : report.criteria) {
    if (!c.ran) continue;
    if (c.id == 8) {
      Json max = Json::object();
      for (const auto& m : c.detail["maxima"]) max[std::to_string(m["n"].get<std::uint64_t>())] = m["max"];
      doc["decay"] = {{"family", "symmetrized"}, {"seed", report.seed}, {"max", max}};
    }
    if (c.id == 10) {
      Json max = Json::object();
      for (const auto& h : c.detail["cohorts"]) max[std::to_string(h["level"].get<int>())] = h["max"];
      doc["cohorts"] = {{"window", window}, {"nmax", n_max}, {"max", max}};
    }
  }
  return doc;
}

/// "[id] PASS  title: summary" lines, with the time when it exceeded the limit.
inline void print_verdicts(std::ostream& out, const CertifyReport& report) {
  for (const auto& c : report.criteria) {
    out << "[" << c.id << "] " << c.status() << "  " << c.title << ": " << c.summary;
    if (c.over_time()) out << " (took " << static_cast<std::int64_t>(c.seconds) << " s, limit " << c.limit << " s)";
    out << '\n';
  }
}

}  // namespace corona
