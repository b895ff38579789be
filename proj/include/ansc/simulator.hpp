#pragma once

// Synthetic fleets and a seeded, tick-based failure/repair timeline.
//
// Randomness comes from std::mt19937_64 (fully specified by the standard)
// seeded per purpose with splitmix64(seed, stream). All samplers are written
// out here instead of using <random> distributions, whose algorithms differ
// between standard libraries. Streams:
//   fleet        element counts, capacities and demand fractions
//   rates        per-element base failure rate
//   events       failure arrivals, repair durations and causes
//   maintenance  maintenance window arrivals

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <unordered_map>
#include <span>
#include <string>
#include <vector>

#include "ansc/calibration.hpp"
#include "ansc/fabric.hpp"
#include "ansc/hazard.hpp"
#include "ansc/pipeline.hpp"
#include "ansc/scoring.hpp"

namespace ansc::sim {

enum class Stream : std::uint64_t { fleet = 1, rates = 2, events = 3, maintenance = 4 };

class Rng {
 public:
  Rng(std::uint64_t seed, Stream stream);

  std::uint64_t next();
  /// Uniform on [0, 1).
  double uniform01();
  /// Uniform integer on [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double uniform(double lo, double hi);
  double exponential(double mean);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct IntRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool operator==(const IntRange&) const = default;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
  bool operator==(const RealRange&) const = default;
};

struct FleetGenSpec {
  std::uint64_t seed = 42;
  int n_regions = 60;
  int n_datacenters = 400;
  int layers_per_dc = 3;
  IntRange elements_per_layer{8, 32};
  IntRange element_capacity{40, 100};
  RealRange demand_fraction{0.55, 0.85};
  Timestamp created_at = make_timestamp(2026, 1, 1);

  void check() const;
  bool operator==(const FleetGenSpec&) const = default;
};

enum class SimEventKind { fail, repair, maintenance_start, maintenance_end };
std::string_view to_string(SimEventKind k);

struct SimEvent {
  Timestamp at{};
  SimEventKind kind = SimEventKind::fail;
  std::string element_id;

  bool operator==(const SimEvent&) const = default;
};

enum class CalibrationMode {
  per_tick,
  /// Calibrate at the first tick of each calendar year and hold the
  /// thresholds for the rest of it.
  annual_freeze,
};

struct ScenarioConfig {
  Timestamp start = make_timestamp(2026, 1, 1);
  int duration_days = 365;
  double tick_days = 1.0;
  /// History generated before `start` so the first ticks have data.
  int preroll_days = 730;
  RealRange base_fail_rate_per_year{0.1, 1.0};
  double mean_repair_days = 3.0;
  double maintenance_rate_per_year = 0.25;
  double maintenance_days = 1.0;
  hazard::HazardParams hazard;
  calibration::BudgetConfig budget;
  CalibrationMode calibration = CalibrationMode::per_tick;

  void check() const;
  /// Hazard parameters with the horizon taken from the budget.
  hazard::HazardParams hazard_params() const;
};

fabric::FabricTopology generate_fleet(const FleetGenSpec& spec);

/// Failure incidents over [start - preroll, start + duration). Each element
/// draws a rate from base_fail_rate_per_year; arrivals are Poisson and an
/// element only fails again after its previous repair.
std::vector<hazard::IncidentRecord> generate_history(const fabric::FabricTopology& fleet,
                                                     const ScenarioConfig& config,
                                                     std::uint64_t seed);

/// Maintenance windows (cause "maintenance") over the same span.
std::vector<hazard::IncidentRecord> generate_maintenance(const fabric::FabricTopology& fleet,
                                                         const ScenarioConfig& config,
                                                         std::uint64_t seed);

/// Failures and maintenance windows together, sorted by start.
std::vector<hazard::IncidentRecord> generate_incidents(const fabric::FabricTopology& fleet,
                                                       const ScenarioConfig& config,
                                                       std::uint64_t seed);

/// Time-ordered events. Overlapping failures of one element are merged so a
/// repair always follows an unresolved failure.
std::vector<SimEvent> events_from_history(std::span<const hazard::IncidentRecord> history);

class Simulation {
 public:
  Simulation(fabric::FabricTopology fleet, std::vector<hazard::IncidentRecord> history,
             ScenarioConfig config);

  std::size_t total_ticks() const { return total_ticks_; }
  std::size_t ticks_done() const { return tick_; }
  bool done() const { return tick_ >= total_ticks_; }
  Timestamp tick_time(std::size_t k) const;

  /// Apply due events, re-estimate hazards, score and color the fleet, then
  /// advance persistence. Throws ConflictError when the scenario is over.
  const pipeline::FleetScores& step();

  const fabric::FabricTopology& fleet() const { return fleet_; }
  const hazard::HazardTable& hazards() const { return hazards_; }
  const pipeline::FleetScores& latest() const { return latest_; }
  const scoring::PersistenceBook& persistence() const { return persistence_; }
  const std::vector<hazard::IncidentRecord>& history() const { return history_; }
  const ScenarioConfig& config() const { return config_; }

 private:
  void apply_events_until(Timestamp t);

  fabric::FabricTopology fleet_;
  std::vector<hazard::IncidentRecord> history_;
  ScenarioConfig config_;
  fabric::ElementIndex element_index_;
  hazard::IncidentIndex incident_index_;
  std::vector<SimEvent> events_;
  std::size_t next_event_ = 0;
  std::unordered_map<std::string, std::pair<bool, bool>> flags_;  // failed, in maintenance

  hazard::HazardTable hazards_;
  scoring::PersistenceBook persistence_;
  scoring::ViolationCache cache_;
  std::optional<pipeline::ThresholdPair> frozen_;
  int frozen_year_ = 0;
  pipeline::FleetScores latest_;
  std::size_t tick_ = 0;
  std::size_t total_ticks_ = 0;
};

struct ScenarioResult {
  /// Scope id -> series, for every layer, datacenter and region.
  std::map<std::string, scoring::ScoreSeries> series;
  std::vector<calibration::Assignment> datacenter_assignments;
  std::vector<calibration::Assignment> region_assignments;
  pipeline::FleetScores final_scores;
  fabric::FabricTopology final_fleet;
};

ScenarioResult run_scenario(fabric::FabricTopology fleet, std::vector<hazard::IncidentRecord> history,
                            const ScenarioConfig& config);

struct HeatmapCell {
  std::string dc_id;
  scoring::Color color = scoring::Color::green;
  double persisted = 0.0;
};

struct HeatmapRow {
  std::string region_id;
  std::vector<HeatmapCell> cells;
};

/// Rows by region id, cells by descending persisted score (ties by dc id).
/// Only datacenter cards are placed; cards must share one timestamp.
std::vector<HeatmapRow> export_heatmap(std::span<const scoring::ScoreCard> cards,
                                       const std::map<std::string, std::string>& region_of);

std::string heatmap_csv(const std::vector<HeatmapRow>& rows);

}  // namespace ansc::sim
