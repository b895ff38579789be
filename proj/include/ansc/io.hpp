#pragma once

// File formats. Every loader rejects unknown keys and reports the JSON path
// of the offending value. Writers emit fields in a fixed order so identical
// inputs produce byte-identical files.
//
//   fleet        JSON document {regions, datacenters, created_at}
//   incidents    NDJSON {element_id, start, end, cause}
//   scorecards   JSON array of {scope, scope_id, es, p_fail, raw, persisted, color, at}
//   thresholds   JSON {t_red, t_orange, t_amber, calibrated_at, population}
//   assignments  NDJSON {scope_id, date, color}
//
// An infinite ES (no demand, capacity present) is written as null.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ansc/calibration.hpp"
#include "ansc/fabric.hpp"
#include "ansc/hazard.hpp"
#include "ansc/pipeline.hpp"
#include "ansc/scoring.hpp"
#include "ansc/simulator.hpp"
#include "ansc/whatif.hpp"

namespace ansc::io {

using Json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Parse JSON text; syntax errors become ParseError naming `origin`.
Json parse_json(std::string_view text, std::string_view origin);
std::string dump(const Json& j);

Json to_json(const fabric::FabricTopology& fleet);
/// Structural parse plus validate(); throws ParseError or ValidationError.
fabric::FabricTopology fleet_from_json(const Json& j);
fabric::FabricTopology load_fleet(const std::filesystem::path& path);
void save_fleet(const fabric::FabricTopology& fleet, const std::filesystem::path& path);
Json to_json(const std::vector<fabric::Violation>& violations);

Json to_json(const hazard::IncidentRecord& r);
hazard::IncidentRecord incident_from_json(const Json& j, const std::string& path = "$");
std::vector<hazard::IncidentRecord> parse_incidents(std::string_view ndjson, std::string_view origin);
std::string format_incidents(const std::vector<hazard::IncidentRecord>& records);
std::vector<hazard::IncidentRecord> load_incidents(const std::filesystem::path& path);
void save_incidents(const std::vector<hazard::IncidentRecord>& records, const std::filesystem::path& path);

Json to_json(const scoring::ScoreCard& card);
scoring::ScoreCard scorecard_from_json(const Json& j, const std::string& path = "$");
Json to_json(const std::vector<scoring::ScoreCard>& cards);
std::vector<scoring::ScoreCard> scorecards_from_json(const Json& j);
std::vector<scoring::ScoreCard> load_scorecards(const std::filesystem::path& path);
void save_scorecards(const std::vector<scoring::ScoreCard>& cards, const std::filesystem::path& path);

Json to_json(const calibration::Thresholds& t);
calibration::Thresholds thresholds_from_json(const Json& j);
calibration::Thresholds load_thresholds(const std::filesystem::path& path);
void save_thresholds(const calibration::Thresholds& t, const std::filesystem::path& path);

Json to_json(const calibration::BudgetConfig& b);
/// Missing keys keep their defaults.
calibration::BudgetConfig budget_from_json(const Json& j);
calibration::BudgetConfig load_budget(const std::filesystem::path& path);

Json to_json(const calibration::Assignment& a);
calibration::Assignment assignment_from_json(const Json& j, const std::string& path = "$");
std::string format_assignments(const std::vector<calibration::Assignment>& assignments);
std::vector<calibration::Assignment> load_assignments(const std::filesystem::path& path);
Json to_json(const calibration::AuditReport& report);

Json to_json(const whatif::Action& a);
std::vector<whatif::Action> actions_from_json(const Json& j);
std::vector<whatif::Action> load_actions(const std::filesystem::path& path);
Json to_json(const whatif::WhatIfResult& r);

Json to_json(const scoring::ScoreSeries& s);
Json to_json(const scoring::Posture& p);
Json to_json(const std::vector<sim::HeatmapRow>& rows);

Json to_json(const sim::FleetGenSpec& spec);
sim::FleetGenSpec fleet_spec_from_json(const Json& j);
Json to_json(const sim::ScenarioConfig& config);
sim::ScenarioConfig scenario_from_json(const Json& j);

/// `{fleet: FleetGenSpec, scenario: ScenarioConfig, history_seed}`; every
/// part optional.
struct ScenarioFile {
  sim::FleetGenSpec fleet;
  sim::ScenarioConfig scenario;
  std::uint64_t history_seed = 7;
};
ScenarioFile scenario_file_from_json(const Json& j);
Json to_json(const ScenarioFile& f);

}  // namespace ansc::io
