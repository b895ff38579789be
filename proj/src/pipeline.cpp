#include "ansc/pipeline.hpp"

#include <unordered_map>

namespace ansc::pipeline {

using calibration::Population;
using scoring::ScoreCard;

namespace {

void color_population(std::vector<ScoreCard>& cards, const calibration::BudgetConfig& budget,
                      Population population, Timestamp at, const calibration::Thresholds* frozen,
                      ColorRule rule, calibration::Thresholds& used) {
  if (cards.empty()) {
    used = frozen ? *frozen : calibration::Thresholds{};
    used.population = population;
    return;
  }
  std::vector<calibration::ScoredSite> sites;
  sites.reserve(cards.size());
  for (const auto& c : cards) sites.push_back({c.scope_id, c.persisted});

  used = frozen ? *frozen : calibration::calibrate(sites, budget, population, at);
  if (rule == ColorRule::ranked) {
    auto colors = calibration::assign_colors(sites, used, budget);
    for (std::size_t i = 0; i < cards.size(); ++i) cards[i].color = colors[i];
  } else {
    for (auto& c : cards) c.color = scoring::map_color(c.persisted, used.cuts());
  }
}

}  // namespace

std::vector<ScoreCard> FleetScores::all_cards() const {
  std::vector<ScoreCard> out;
  out.reserve(regions.size() + datacenters.size() + layers.size());
  out.insert(out.end(), regions.begin(), regions.end());
  out.insert(out.end(), datacenters.begin(), datacenters.end());
  out.insert(out.end(), layers.begin(), layers.end());
  return out;
}

const ScoreCard* FleetScores::find(scoring::Scope scope, std::string_view scope_id) const {
  const auto& pool = scope == scoring::Scope::layer        ? layers
                     : scope == scoring::Scope::datacenter ? datacenters
                                                           : regions;
  for (const auto& c : pool) {
    if (c.scope_id == scope_id) return &c;
  }
  return nullptr;
}

FleetScores score_fleet(const fabric::FabricTopology& fleet, const hazard::HazardTable& hazards,
                        const calibration::BudgetConfig& budget,
                        const scoring::PersistenceBook* persistence, Timestamp at,
                        ColorPolicy policy, scoring::ViolationCache* cache) {
  budget.check();
  const auto params = budget.scoring_params();

  FleetScores out;
  out.at = at;
  std::unordered_map<std::string, std::vector<ScoreCard>> by_region;
  for (const auto& dc : fleet.datacenters) {
    auto scored = scoring::score_datacenter(dc, hazards, params, persistence, at, cache);
    out.layers.insert(out.layers.end(), scored.layers.begin(), scored.layers.end());
    out.datacenters.push_back(scored.card);
  }

  color_population(out.datacenters, budget, Population::datacenter, at,
                   policy.frozen ? &policy.frozen->datacenter : nullptr, policy.rule,
                   out.thresholds.datacenter);

  for (std::size_t i = 0; i < fleet.datacenters.size(); ++i) {
    by_region[fleet.datacenters[i].region_id].push_back(out.datacenters[i]);
  }
  for (const auto& region : fleet.regions) {
    auto it = by_region.find(region);
    if (it == by_region.end()) continue;
    out.regions.push_back(scoring::score_region(region, it->second));
  }
  color_population(out.regions, budget, Population::region, at,
                   policy.frozen ? &policy.frozen->region : nullptr, policy.rule,
                   out.thresholds.region);

  const auto layer_cuts = out.thresholds.datacenter.cuts();
  for (auto& layer : out.layers) layer.color = scoring::map_color(layer.persisted, layer_cuts);
  return out;
}

void record_persistence(scoring::PersistenceBook& book, const FleetScores& scores, double tick_days) {
  const int year = calendar_year(scores.at);
  for (const auto& layer : scores.layers) book.record(layer.scope_id, year, layer.color, tick_days);
}

std::map<std::string, std::string> region_of(const fabric::FabricTopology& fleet) {
  std::map<std::string, std::string> out;
  for (const auto& dc : fleet.datacenters) out.emplace(dc.id, dc.region_id);
  return out;
}

}  // namespace ansc::pipeline
