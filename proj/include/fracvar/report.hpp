#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "fracvar/levytest.hpp"

namespace fracvar {

inline constexpr int kReportSchemaVersion = 1;

inline nlohmann::json to_json(const CriterionRecord& c) {
  nlohmann::json seq = nlohmann::json::array();
  for (const auto& [x, v] : c.sequence) seq.push_back({x, v});
  return nlohmann::json{
      {"name", c.name},           {"statistic", c.statistic},
      {"reference", c.reference}, {"tolerance", c.tolerance},
      {"verdict", c.verdict},     {"sequence", seq},
      {"note", c.note},
  };
}

inline nlohmann::json to_json(const TestReport& r) {
  nlohmann::json crits = nlohmann::json::array();
  for (const auto& c : r.criteria) crits.push_back(to_json(c));
  nlohmann::json sched = nlohmann::json::array();
  for (auto n : r.schedule) sched.push_back(n);
  return nlohmann::json{
      {"schema_version", kReportSchemaVersion},
      {"title", r.title},
      {"overall", r.pass ? "pass" : "fail"},
      {"criteria", crits},
      {"note", r.note},
      {"provenance",
       {{"master_seed", r.master_seed},
        {"grid", {{"t0", r.grid.t0}, {"dt", r.grid.dt}, {"steps", r.grid.steps}}},
        {"ensemble_size", r.ensemble_size},
        {"schedule", sched}}},
  };
}

/// Structural validation of a serialized report against the shipped schema
/// (schemas/report.schema.json documents the same shape).
inline void validate_report_json(const nlohmann::json& j) {
  auto need = [&](const char* key) {
    if (!j.contains(key))
      throw parse_error(std::string("report: missing required key '") + key + "'");
  };
  need("schema_version");
  need("title");
  need("overall");
  need("criteria");
  need("provenance");
  if (!j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kReportSchemaVersion)
    throw parse_error("report: unsupported schema_version");
  if (!j["criteria"].is_array()) throw parse_error("report: criteria must be an array");
  for (const auto& c : j["criteria"]) {
    for (const char* key : {"name", "statistic", "reference", "tolerance", "verdict"})
      if (!c.contains(key))
        throw parse_error(std::string("report: criterion missing key '") + key + "'");
    const std::string v = c["verdict"].get<std::string>();
    if (v != "pass" && v != "fail" && v != "error")
      throw parse_error("report: criterion verdict must be pass|fail|error");
  }
  const auto& prov = j["provenance"];
  for (const char* key : {"master_seed", "grid", "ensemble_size", "schedule"})
    if (!prov.contains(key))
      throw parse_error(std::string("report: provenance missing key '") + key + "'");
}

inline void write_report_json(const std::string& filename, const TestReport& r) {
  std::ofstream out(filename);
  if (!out) throw std::runtime_error("cannot open for writing: " + filename);
  out << to_json(r).dump(2) << "\n";
}

}  // namespace fracvar
