#pragma once

// One scoring pass over a fleet: layer -> datacenter -> region cards, with
// colors from calibrated (or frozen) thresholds.

#include <map>
#include <string>
#include <vector>

#include "ansc/calibration.hpp"
#include "ansc/fabric.hpp"
#include "ansc/hazard.hpp"
#include "ansc/scoring.hpp"

namespace ansc::pipeline {

struct ThresholdPair {
  calibration::Thresholds datacenter;
  calibration::Thresholds region;
};

enum class ColorRule {
  /// Bucket by rank so per-color counts stay within the caps.
  ranked,
  /// Plain threshold comparison per card.
  threshold,
};

struct ColorPolicy {
  /// Reuse these thresholds instead of calibrating on the current scores.
  const ThresholdPair* frozen = nullptr;
  ColorRule rule = ColorRule::ranked;
};

struct FleetScores {
  Timestamp at{};
  std::vector<scoring::ScoreCard> layers;
  std::vector<scoring::ScoreCard> datacenters;
  std::vector<scoring::ScoreCard> regions;
  ThresholdPair thresholds;

  /// Regions, then datacenters, then layers.
  std::vector<scoring::ScoreCard> all_cards() const;
  const scoring::ScoreCard* find(scoring::Scope scope, std::string_view scope_id) const;
};

FleetScores score_fleet(const fabric::FabricTopology& fleet, const hazard::HazardTable& hazards,
                        const calibration::BudgetConfig& budget,
                        const scoring::PersistenceBook* persistence, Timestamp at,
                        ColorPolicy policy = {}, scoring::ViolationCache* cache = nullptr);

/// Advance layer-scope persistence by one tick using the layer colors.
void record_persistence(scoring::PersistenceBook& book, const FleetScores& scores, double tick_days);

/// Datacenter id -> region id.
std::map<std::string, std::string> region_of(const fabric::FabricTopology& fleet);

}  // namespace ansc::pipeline
