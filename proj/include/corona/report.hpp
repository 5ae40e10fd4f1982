#pragma once

// Report emission. Every number that is not an integer is written as an
// exact "p/q" string; JSON documents carry "schema": "corona-witness/1".

#include "corona/higson.hpp"
#include "corona/integer.hpp"
#include "corona/modular_group.hpp"
#include "corona/sweep.hpp"
#include "corona/zeta_builder.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace corona {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "corona-witness/1";

inline Json json_document(const std::string& kind) {
  Json doc;
  doc["schema"] = schema_version;
  doc["kind"] = kind;
  return doc;
}

inline std::string vector_text(const LatticeVector& v) { return "(" + v.m.str() + "," + v.n.str() + ")"; }

inline std::string point_text(const ProjectivePoint& t) { return t.m().str() + "/" + t.n().str(); }

/// Quotes a CSV field when it contains a comma or a quote.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
  out << '\n';
}

// --- higson -------------------------------------------------------------

struct HigsonRow {
  LatticeVector a;
  AnnulusMax annulus;
};

inline void write_higson_csv(std::ostream& out, const std::vector<HigsonRow>& rows) {
  csv_row(out, {"R", "a1", "a2", "max_dev_sq_num", "max_dev_sq_den", "argmax_m", "argmax_n"});
  for (const auto& r : rows) {
    const auto& m = r.annulus;
    csv_row(out, {std::to_string(m.radius), r.a.m.str(), r.a.n.str(), numerator(m.max_dev_sq).str(),
                  denominator(m.max_dev_sq).str(), m.argmax ? m.argmax->m.str() : "", m.argmax ? m.argmax->n.str() : ""});
  }
}

inline Json higson_json(const std::vector<HigsonRow>& rows) {
  Json list = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["R"] = r.annulus.radius;
    j["a"] = vector_text(r.a);
    j["max_dev_sq"] = rational_text(r.annulus.max_dev_sq);
    j["argmax"] = r.annulus.argmax ? vector_text(*r.annulus.argmax) : "";
    list.push_back(j);
  }
  return list;
}

// --- defect ---------------------------------------------------------------

struct DefectLine {
  std::string family;
  std::string g;
  std::string t_or_y;
  std::uint64_t n = 0;
  Rational defect{0};
};

inline void write_defect_csv(std::ostream& out, const std::vector<DefectLine>& rows) {
  csv_row(out, {"family", "g", "t_or_y", "n", "defect_num", "defect_den"});
  for (const auto& r : rows)
    csv_row(out, {r.family, r.g, r.t_or_y, std::to_string(r.n), numerator(r.defect).str(), denominator(r.defect).str()});
}

inline Json defect_json(const std::vector<DefectLine>& rows) {
  Json list = Json::array();
  for (const auto& r : rows)
    list.push_back({{"family", r.family}, {"g", r.g}, {"t_or_y", r.t_or_y}, {"n", r.n}, {"defect", rational_text(r.defect)}});
  return list;
}

inline Json sweep_max_json(const SweepMax& m) {
  Json j;
  j["n"] = m.n;
  j["max"] = rational_text(m.max);
  j["points"] = m.points;
  if (m.argmax) {
    j["suite"] = m.argmax->suite;
    j["y"] = vector_text(m.argmax->y);
    j["g"] = enumerate_E(1)[m.argmax->argmax_g].text();
    j["a"] = vector_text(m.argmax->argmax_a);
    j["group_part"] = rational_text(m.argmax->group_part);
    j["shift_part"] = rational_text(m.argmax->shift_part);
  }
  return j;
}

// --- zeta -------------------------------------------------------------------

struct EpsilonLine {
  std::string family;
  std::string g;
  LatticeVector x, x1;
  std::int64_t y_m = 0, y_n = 0;
  int level = 0;
  Rational eps{0};
};

inline void write_epsilon_csv(std::ostream& out, const std::vector<EpsilonLine>& rows) {
  csv_row(out, {"family", "g", "x", "x1'", "y_m", "y_n", "l", "eps_num", "eps_den"});
  for (const auto& r : rows)
    csv_row(out, {r.family, r.g, vector_text(r.x), vector_text(r.x1), std::to_string(r.y_m), std::to_string(r.y_n),
                  std::to_string(r.level), numerator(r.eps).str(), denominator(r.eps).str()});
}

inline Json level_stats_json(const LevelTable& table) {
  Json list = Json::array();
  for (const auto& s : table.stats()) {
    Json j;
    j["n"] = s.n;
    j["prefix"] = s.prefix;
    j["omega"] = s.omega;
    j["from_shifts"] = s.from_shifts;
    j["from_images"] = s.from_images;
    j["from_defect"] = s.from_defect;
    j["evaluated"] = s.evaluated;
    j["image_exits"] = s.image_exits;
    j["shift_exits"] = s.shift_exits;
    j["saturated"] = s.saturated;
    list.push_back(j);
  }
  return list;
}

inline Json table_json(const LevelTable& table) {
  Json j;
  j["window"] = table.radius();
  j["margin"] = table.margin();
  j["nmax"] = table.n_max();
  j["family"] = variant_name(table.family());
  j["scale"] = schedule_name(table.schedule());
  j["zeta0"] = "zeta_1";
  j["digest"] = table.digest();
  Json hist = Json::object();
  const auto h = table.histogram(true);
  for (std::size_t l = 1; l < h.size(); ++l)
    hist[l <= static_cast<std::size_t>(table.n_max()) ? std::to_string(l) : "beyond"] = h[l];
  j["interior_histogram"] = hist;
  j["levels"] = level_stats_json(table);
  return j;
}

inline Json cohorts_json(const EpsilonReport& report) {
  Json list = Json::array();
  for (const auto& c : report.cohorts) {
    Json j;
    j["level"] = c.level;
    j["points"] = c.points;
    j["stride"] = c.stride;
    j["skipped_images"] = c.skipped;
    j["min"] = rational_text(c.min);
    j["median"] = rational_text(c.median);
    j["max"] = rational_text(c.max);
    j["argmax"] = "(" + std::to_string(c.argmax_m) + "," + std::to_string(c.argmax_n) + ")";
    list.push_back(j);
  }
  return list;
}

}  // namespace corona
