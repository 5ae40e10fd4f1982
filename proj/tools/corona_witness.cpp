#include "corona/corona.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#ifndef CORONA_DEFAULT_BASELINE
#define CORONA_DEFAULT_BASELINE ""
#endif

using namespace corona;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2 };

struct Output {
  std::string path;
  std::string format = "csv";
  std::unique_ptr<std::ofstream> file;

  std::ostream& stream() {
    if (path.empty() || path == "-") return std::cout;
    if (!file) {
      file = std::make_unique<std::ofstream>(path);
      if (!*file) throw std::invalid_argument("cannot write " + path);
    }
    return *file;
  }
  [[nodiscard]] bool json() const { return format == "json"; }
};

void add_output(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.path, "Output file (default: stdout)");
  cmd->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
}

GroupElement parse_g(const std::string& text) {
  static const std::map<std::string, GroupElement> named{{"I", GroupElement::identity()}, {"S", GroupElement::S()},
                                                          {"T", GroupElement::T()},       {"T^-1", GroupElement::T_inv()},
                                                          {"Tinv", GroupElement::T_inv()}, {"L", GroupElement::L()},
                                                          {"L^-1", GroupElement::L_inv()}};
  if (auto it = named.find(text); it != named.end()) return it->second;
  return parse_group_element(text);
}

// --- walk -------------------------------------------------------------------

struct WalkArgs {
  std::string target;
  std::string variant = "naive";
  std::uint64_t n = 0;
  Output out;
};

int run_walk(WalkArgs& a) {
  const auto t = parse_projective_point(a.target);
  const auto variant = parse_variant(a.variant);
  const auto word = walk_word(t);
  const auto vertices = mediant_vertices(t);
  std::uint64_t n = a.n;
  if (n == 0) n = from_big<long long>(word.depth) + (variant == WalkVariant::naive ? 1 : 4);
  auto stream = walk(t, variant);
  std::vector<PslClass> own, mirror;
  while (own.size() < n && stream.has_next()) {
    auto step = stream.next_step();
    own.push_back(step.own);
    mirror.push_back(step.mirror);
  }
  auto& os = a.out.stream();
  if (a.out.json()) {
    Json doc = json_document("walk");
    doc["target"] = point_text(t);
    doc["variant"] = variant_name(variant);
    doc["depth"] = word.depth.str();
    Json vs = Json::array(), es = Json::array(), ms = Json::array();
    for (const auto& v : vertices) vs.push_back(point_text(v));
    for (const auto& g : own) es.push_back(g.text());
    for (const auto& g : mirror) ms.push_back(g.text());
    doc["mediant_vertices"] = vs;
    doc["elements"] = es;
    if (variant == WalkVariant::symmetrized) doc["mirror"] = ms;
    os << doc.dump(2) << '\n';
    return ok;
  }
  csv_row(os, {"kind", "index", "value"});
  for (std::size_t i = 0; i < vertices.size(); ++i) csv_row(os, {"vertex", std::to_string(i + 1), point_text(vertices[i])});
  for (std::size_t i = 0; i < own.size(); ++i) csv_row(os, {"element", std::to_string(i), own[i].text()});
  if (variant == WalkVariant::symmetrized)
    for (std::size_t i = 0; i < mirror.size(); ++i) csv_row(os, {"mirror", std::to_string(i), mirror[i].text()});
  return ok;
}

// --- balls ------------------------------------------------------------------

struct BallArgs {
  int n = 8;
  bool elements = false;
  Output out;
};

int run_balls(BallArgs& a) {
  if (a.n < 0 || a.n > 16) throw std::invalid_argument("--n must be in 0..16");
  const WordBalls balls(a.n);
  const auto ref = oracle::ball_sizes(a.n);
  auto& os = a.out.stream();
  if (a.out.json()) {
    Json doc = json_document("balls");
    Json sizes = Json::array();
    for (int r = 0; r <= a.n; ++r) sizes.push_back({{"r", r}, {"size", balls.size(r)}, {"oracle", ref[static_cast<std::size_t>(r)]}});
    doc["sizes"] = sizes;
    if (a.elements) {
      Json es = Json::array();
      for (const auto& g : word_ball(a.n)) es.push_back(g.text());
      doc["elements"] = es;
    }
    os << doc.dump(2) << '\n';
  } else if (a.elements) {
    csv_row(os, {"element"});
    for (const auto& g : word_ball(a.n)) csv_row(os, {g.text()});
  } else {
    csv_row(os, {"r", "size", "oracle_size"});
    for (int r = 0; r <= a.n; ++r)
      csv_row(os, {std::to_string(r), std::to_string(balls.size(r)), std::to_string(ref[static_cast<std::size_t>(r)])});
  }
  for (int r = 0; r <= a.n; ++r)
    if (balls.size(r) != ref[static_cast<std::size_t>(r)]) return failed;
  return ok;
}

// --- higson -----------------------------------------------------------------

struct HigsonArgs {
  std::vector<std::string> shifts;
  std::vector<std::int64_t> radii{64, 128, 256, 512, 1024};
  std::int64_t box = 0;
  int jobs = 0;
  Output out;
};

int run_higson(HigsonArgs& a) {
  const unsigned jobs = resolve_jobs(a.jobs);
  std::vector<LatticeVector> shifts;
  for (const auto& s : a.shifts) shifts.push_back(parse_lattice_vector(s));
  if (shifts.empty())
    for (const auto& v : enumerate_F(2))
      if (!v.is_zero()) shifts.push_back(v);
  std::vector<HigsonRow> rows;
  for (const auto& v : shifts)
    for (const auto& m : higson_scan(v, a.radii, jobs)) rows.push_back({v, m});
  std::int64_t checked = 0, violations = 0;
  if (a.box > 0)
    for (const auto& v : shifts) {
      auto rep = higson_bound_scan(v, a.box, jobs);
      checked += rep.checked;
      violations += rep.violations;
    }
  auto& os = a.out.stream();
  if (a.out.json()) {
    Json doc = json_document("higson");
    doc["annuli"] = higson_json(rows);
    if (a.box > 0) doc["bound"] = {{"box", a.box}, {"checked", checked}, {"violations", violations}};
    os << doc.dump(2) << '\n';
  } else {
    write_higson_csv(os, rows);
    if (a.box > 0)
      std::cerr << "bound |x|_inf <= " << a.box << ": " << violations << " violations in " << checked << " checks\n";
  }
  return violations == 0 ? ok : failed;
}

// --- defect -----------------------------------------------------------------

struct DefectArgs {
  std::string family = "symmetrized";
  std::string suite = "axis";
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> n{8};
  std::string target;
  std::string g;
  std::string x = "(0,1)";
  std::string x1 = "(0,0)";
  bool max = false;
  int jobs = 0;
  Output out;
};

int run_defect(DefectArgs& a) {
  const auto family = parse_variant(a.family);
  const unsigned jobs = resolve_jobs(a.jobs);
  for (auto n : a.n)
    if (n == 0) throw std::invalid_argument("--n values must be positive");
  std::vector<DefectLine> rows;
  Json maxima = Json::array();
  if (!a.target.empty()) {
    const auto t = parse_projective_point(a.target);
    const auto g = parse_g(a.g.empty() ? "T" : a.g);
    for (auto n : a.n) rows.push_back({variant_name(family), g.text(), point_text(t), n, boundary_defect(g, t, n, family)});
  } else {
    std::vector<Suite> suites;
    if (a.suite == "all")
      for (const auto& name : suite_names()) suites.push_back(sample_suite(name, a.seed));
    else
      suites.push_back(sample_suite(a.suite, a.seed));
    const auto group = enumerate_E(1);
    if (a.max) {
      for (auto n : a.n) {
        SweepMax all;
        all.n = n;
        for (const auto& s : suites)
          for (auto& row : sweep_suite(s, n, family, jobs)) {
            rows.push_back({variant_name(family), group[row.argmax_g].text(), vector_text(row.y), n, row.total});
            ++all.points;
            if (!all.argmax || row.total > all.max) {
              all.max = row.total;
              all.argmax = row;
            }
          }
        maxima.push_back(sweep_max_json(all));
      }
    } else {
      const auto g = parse_g(a.g.empty() ? "I" : a.g);
      const auto x = parse_lattice_vector(a.x), x1 = parse_lattice_vector(a.x1);
      for (auto n : a.n)
        for (const auto& s : suites)
          for (const auto& y : s.points) {
            if ((x + y + x1).is_zero()) continue;
            rows.push_back({variant_name(family), g.text(), vector_text(y), n, pair_defect(g, x, x1, y, n, family)});
          }
    }
  }
  auto& os = a.out.stream();
  if (a.out.json()) {
    Json doc = json_document("defect");
    doc["family"] = variant_name(family);
    doc["mode"] = !a.target.empty() ? "boundary" : a.max ? "max" : "triple";
    if (a.target.empty() && !a.max) doc["x"] = a.x, doc["x1'"] = a.x1;
    doc["rows"] = defect_json(rows);
    if (a.max) doc["maxima"] = maxima;
    os << doc.dump(2) << '\n';
  } else {
    write_defect_csv(os, rows);
  }
  return ok;
}

// --- zeta -------------------------------------------------------------------

struct ZetaArgs {
  std::int64_t box = 256;
  int nmax = 8;
  std::int64_t margin = -1;
  std::string family = "symmetrized";
  std::string scale = "quadratic";
  std::string table_out;
  int jobs = 0;
  Output out;
};

int run_zeta(ZetaArgs& a) {
  const auto family = parse_variant(a.family);
  const auto schedule = parse_schedule(a.scale);
  const unsigned jobs = resolve_jobs(a.jobs);
  if (a.nmax < 1 || a.nmax > 250) throw std::invalid_argument("--nmax must be in 1..250");
  const std::int64_t margin = a.margin >= 0 ? a.margin : default_margin(a.nmax);
  auto table = build_levels(a.box, a.nmax, family, schedule, margin, jobs, [](const LevelStats& s) {
    std::cerr << "level " << s.n << ": |Omega| = " << s.omega << (s.saturated ? " (saturated)" : "") << '\n';
  });
  if (!a.table_out.empty()) {
    std::ofstream f(a.table_out);
    if (!f) throw std::invalid_argument("cannot write " + a.table_out);
    table.write(f);
  }
  auto report = epsilon_cohorts(table, jobs);
  auto& os = a.out.stream();
  if (a.out.json()) {
    Json doc = json_document("zeta");
    doc["table"] = table_json(table);
    doc["group"] = report.group;
    doc["cohorts"] = cohorts_json(report);
    os << doc.dump(2) << '\n';
    return ok;
  }
  // every triple at the maximizing point of each cohort
  std::vector<EpsilonLine> rows;
  const auto group = enumerate_E(1);
  const auto box = enumerate_F(1);
  for (const auto& c : report.cohorts) {
    const LatticeVector y{BigInt(c.argmax_m), BigInt(c.argmax_n)};
    for (const auto& g : group)
      for (const auto& x : box)
        for (const auto& x1 : box) {
          try {
            rows.push_back({variant_name(family), g.text(), x, x1, c.argmax_m, c.argmax_n, c.level,
                            epsilon(g.element(), x, x1, y, table)});
          } catch (const std::domain_error&) {
            // g y or x + y + x' without a known level
          }
        }
  }
  write_epsilon_csv(os, rows);
  return ok;
}

// --- certify ----------------------------------------------------------------

struct CertifyArgs {
  bool quick = false;
  int jobs = 0;
  std::uint64_t seed = 0;
  std::string baseline = CORONA_DEFAULT_BASELINE;
  std::string write_baseline;
  std::string table_out;
  bool no_determinism = false;
  Output out;
};

int run_certify(CertifyArgs& a) {
  CertifyOptions o;
  o.quick = a.quick;
  o.jobs = resolve_jobs(a.jobs);
  o.seed = a.seed;
  o.baseline = a.baseline;
  o.log = &std::cerr;
  o.determinism = !a.no_determinism;
  o.table_out = a.table_out;
  auto report = certify(o);
  print_verdicts(std::cout, report);
  if (!a.out.path.empty()) a.out.stream() << summary_json(report).dump(2) << '\n';
  if (!a.write_baseline.empty()) {
    if (a.quick) throw std::invalid_argument("--write-baseline needs a full run");
    std::ofstream f(a.write_baseline);
    if (!f) throw std::invalid_argument("cannot write " + a.write_baseline);
    f << baseline_json(report).dump(2) << '\n';
  }
  return report.all_ok() ? ok : failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact witness families and defect measurements for Z^2 x| SL(2,Z)", "corona_witness"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  WalkArgs walk_args;
  auto* walk_cmd = app.add_subcommand("walk", "Farey walk toward a boundary point");
  walk_cmd->add_option("--target", walk_args.target, "Target p/q or inf")->required();
  walk_cmd->add_option("--variant,--family", walk_args.variant, "naive, tails or symmetrized");
  walk_cmd->add_option("--n", walk_args.n, "Number of walk elements (default: depth based)");
  add_output(walk_cmd, walk_args.out);

  BallArgs ball_args;
  auto* ball_cmd = app.add_subcommand("balls", "Word ball sizes of PSL(2,Z)");
  ball_cmd->add_option("--n", ball_args.n, "Radius");
  ball_cmd->add_flag("--elements", ball_args.elements, "List the elements of the ball");
  add_output(ball_cmd, ball_args.out);

  HigsonArgs higson_args;
  auto* higson_cmd = app.add_subcommand("higson", "Annulus maxima of the boundary map deviation");
  higson_cmd->add_option("--shift", higson_args.shifts, "Shift a as m,n (repeatable; default all of F_2)");
  higson_cmd->add_option("--radii", higson_args.radii, "Annulus radii")->delimiter(',');
  higson_cmd->add_option("--box", higson_args.box, "Also check the bound for all |x|_inf <= box");
  higson_cmd->add_option("--jobs", higson_args.jobs, "Worker threads");
  add_output(higson_cmd, higson_args.out);

  DefectArgs defect_args;
  auto* defect_cmd = app.add_subcommand("defect", "Pair defects over a sample suite, or boundary defects");
  defect_cmd->add_option("--family", defect_args.family, "naive, tails or symmetrized");
  defect_cmd->add_option("--suite", defect_args.suite, "axis, ray, generic, cf-bounded or all");
  defect_cmd->add_option("--seed", defect_args.seed, "Seed of the random suites");
  defect_cmd->add_option("--n", defect_args.n, "Prefix lengths")->delimiter(',');
  defect_cmd->add_option("--target", defect_args.target, "Boundary point p/q: report boundary defects instead");
  defect_cmd->add_option("--g", defect_args.g, "Group element: I, S, T, T^-1, L or [[a,b],[c,d]]");
  defect_cmd->add_option("--x", defect_args.x, "Left shift x");
  defect_cmd->add_option("--x1", defect_args.x1, "Right shift x'");
  defect_cmd->add_flag("--max", defect_args.max, "Maximize over g in E_1 and x, x' in F_1");
  defect_cmd->add_option("--jobs", defect_args.jobs, "Worker threads");
  add_output(defect_cmd, defect_args.out);

  ZetaArgs zeta_args;
  auto* zeta_cmd = app.add_subcommand("zeta", "Level table on a window and the epsilon cohorts");
  zeta_cmd->add_option("--box", zeta_args.box, "Window radius M");
  zeta_cmd->add_option("--nmax", zeta_args.nmax, "Highest level");
  zeta_cmd->add_option("--margin", zeta_args.margin, "Interior margin (default 2 nmax^2)");
  zeta_cmd->add_option("--family", zeta_args.family, "naive, tails or symmetrized");
  zeta_cmd->add_option("--scale", zeta_args.scale, "Prefix schedule: quadratic (4n^2) or linear (n)");
  zeta_cmd->add_option("--table-out", zeta_args.table_out, "Write the level table");
  zeta_cmd->add_option("--jobs", zeta_args.jobs, "Worker threads");
  add_output(zeta_cmd, zeta_args.out);

  CertifyArgs certify_args;
  auto* certify_cmd = app.add_subcommand("certify", "Run the acceptance suite");
  certify_cmd->add_flag("--quick", certify_args.quick, "Exact criteria only, on smaller inputs");
  certify_cmd->add_option("--jobs", certify_args.jobs, "Worker threads");
  certify_cmd->add_option("--seed", certify_args.seed, "Seed of the random suites");
  certify_cmd->add_option("--baseline", certify_args.baseline, "Pinned maxima for the measured criteria");
  certify_cmd->add_option("--write-baseline", certify_args.write_baseline, "Write the measured maxima as a baseline");
  certify_cmd->add_option("--table-out", certify_args.table_out, "Write the level table of the structure check");
  certify_cmd->add_flag("--no-determinism", certify_args.no_determinism, "Skip the rerun with another worker count");
  certify_cmd->add_option("--out", certify_args.out.path, "Write the JSON summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*walk_cmd) return run_walk(walk_args);
    if (*ball_cmd) return run_balls(ball_args);
    if (*higson_cmd) return run_higson(higson_args);
    if (*defect_cmd) return run_defect(defect_args);
    if (*zeta_cmd) return run_zeta(zeta_args);
    if (*certify_cmd) return run_certify(certify_args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  }
  return usage;
}
