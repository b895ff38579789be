#include "ansc/scoring.hpp"

#include <algorithm>
#include <limits>

namespace ansc::scoring {

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::layer: return "layer";
    case Scope::datacenter: return "datacenter";
    case Scope::region: return "region";
  }
  return "layer";
}

std::string_view to_string(Color c) {
  switch (c) {
    case Color::green: return "green";
    case Color::amber: return "amber";
    case Color::orange: return "orange";
    case Color::red: return "red";
  }
  return "green";
}

std::optional<Scope> parse_scope(std::string_view s) {
  if (s == "layer") return Scope::layer;
  if (s == "datacenter") return Scope::datacenter;
  if (s == "region") return Scope::region;
  return std::nullopt;
}

std::optional<Color> parse_color(std::string_view s) {
  if (s == "green") return Color::green;
  if (s == "amber") return Color::amber;
  if (s == "orange") return Color::orange;
  if (s == "red") return Color::red;
  return std::nullopt;
}

PersistenceState PersistenceBook::state(std::string_view scope_id, int year) const {
  auto it = states_.find(std::string(scope_id));
  if (it == states_.end() || it->second.year != year) {
    return {std::string(scope_id), 0.0, year};
  }
  return it->second;
}

void PersistenceBook::record(std::string_view scope_id, int year, Color color, double tick_days) {
  auto [it, inserted] = states_.try_emplace(std::string(scope_id));
  auto& s = it->second;
  if (inserted || s.year != year) s = {std::string(scope_id), 0.0, year};
  if (is_elevated(color)) s.elevated_days_ytd = std::min(366.0, s.elevated_days_ytd + tick_days);
}

double effective_safety_margin(CapacityUnits c_avail, CapacityUnits c_req) {
  if (c_avail < 0 || c_req < 0) throw DomainError("capacities must be non-negative");
  if (c_req == 0) return c_avail > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  return static_cast<double>(c_avail - c_req) / static_cast<double>(c_req);
}

double raw_score(double es, double p_viol) {
  if (!(p_viol >= 0.0 && p_viol <= 1.0)) throw DomainError("violation probability must lie in [0, 1]");
  return es < 0.0 ? 1.0 : p_viol;
}

double persistence_adjust(double raw, const PersistenceState& state, double t_pers, double kappa) {
  if (!(t_pers > 0.0)) throw ConfigError("t_pers must be > 0");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be >= 0");
  if (!(raw >= 0.0 && raw <= 1.0)) throw DomainError("raw score must lie in [0, 1]");
  const double overage = std::max(0.0, state.elevated_days_ytd / kDaysPerYear - t_pers) / t_pers;
  return std::min(1.0, raw * (1.0 + kappa * overage));
}

Color map_color(double persisted, const ColorCuts& cuts) {
  if (!(0.0 <= cuts.t_amber && cuts.t_amber <= cuts.t_orange && cuts.t_orange <= cuts.t_red &&
        cuts.t_red <= 1.0)) {
    throw ConfigError("thresholds must satisfy 0 <= t_amber <= t_orange <= t_red <= 1");
  }
  if (persisted >= cuts.t_red) return Color::red;
  if (persisted >= cuts.t_orange) return Color::orange;
  if (persisted >= cuts.t_amber) return Color::amber;
  return Color::green;
}

double ViolationCache::get(const std::string& layer_scope_id,
                           std::span<const hazard::ElementRisk> risks, double beta,
                           CapacityUnits c_avail, CapacityUnits c_req) {
  auto& entry = entries_[layer_scope_id];
  if (!entry.risks.empty() && entry.beta == beta && entry.c_avail == c_avail &&
      entry.c_req == c_req && std::equal(risks.begin(), risks.end(), entry.risks.begin(), entry.risks.end())) {
    return entry.value;
  }
  entry.risks.assign(risks.begin(), risks.end());
  entry.beta = beta;
  entry.c_avail = c_avail;
  entry.c_req = c_req;
  entry.value = hazard::layer_violation_probability(risks, beta, c_avail, c_req);
  return entry.value;
}

ScoreCard score_layer(const fabric::Datacenter& dc, const fabric::ClosLayer& layer,
                      const hazard::HazardTable& hazards, const ScoringParams& params,
                      const PersistenceBook* persistence, Timestamp at, ViolationCache* cache) {
  ScoreCard card;
  card.scope = Scope::layer;
  card.scope_id = fabric::layer_scope_id(dc.id, layer.id);
  card.at = at;

  std::vector<hazard::ElementRisk> risks;
  risks.reserve(layer.elements.size());
  for (const auto& e : layer.elements) {
    if (e.state == fabric::ElementState::up) risks.push_back({e.capacity, hazards.p_fail(e.id)});
  }
  const CapacityUnits c_avail = fabric::available_capacity(layer);
  const CapacityUnits c_req = layer.demand_forecast;

  card.es = effective_safety_margin(c_avail, c_req);
  if (risks.empty()) {
    card.p_fail = c_avail < c_req ? 1.0 : 0.0;
  } else if (cache) {
    card.p_fail = cache->get(card.scope_id, risks, params.beta, c_avail, c_req);
  } else {
    card.p_fail = hazard::layer_violation_probability(risks, params.beta, c_avail, c_req);
  }
  card.raw = raw_score(card.es, card.p_fail);

  const PersistenceState state = persistence ? persistence->state(card.scope_id, calendar_year(at))
                                             : PersistenceState{card.scope_id, 0.0, calendar_year(at)};
  card.persisted = persistence_adjust(card.raw, state, params.t_pers, params.kappa);
  return card;
}

namespace {

// Index of the worst card: highest persisted, ties to the smaller scope id.
std::size_t worst_index(std::span<const ScoreCard> cards) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < cards.size(); ++i) {
    const auto& c = cards[i];
    const auto& b = cards[best];
    if (c.persisted > b.persisted || (c.persisted == b.persisted && c.scope_id < b.scope_id)) best = i;
  }
  return best;
}

}  // namespace

DatacenterScore score_datacenter(const fabric::Datacenter& dc, const hazard::HazardTable& hazards,
                                 const ScoringParams& params, const PersistenceBook* persistence,
                                 Timestamp at, ViolationCache* cache) {
  if (dc.layers.empty()) throw DomainError("datacenter '" + dc.id + "' has no layers");
  DatacenterScore out;
  out.layers.reserve(dc.layers.size());
  for (const auto& layer : dc.layers) {
    out.layers.push_back(score_layer(dc, layer, hazards, params, persistence, at, cache));
  }
  out.card = out.layers[worst_index(out.layers)];
  out.card.scope = Scope::datacenter;
  out.card.scope_id = dc.id;
  return out;
}

ScoreCard score_region(std::string_view region_id, std::span<const ScoreCard> datacenters) {
  if (datacenters.empty()) throw DomainError("region '" + std::string(region_id) + "' has no scored datacenters");
  ScoreCard card = datacenters[worst_index(datacenters)];
  card.scope = Scope::region;
  card.scope_id = std::string(region_id);
  return card;
}

Posture posture_and_movement(const ScoreSeries& series, std::size_t window) {
  if (window < 2) throw DomainError("posture window must be at least 2 points");
  if (series.points.size() < window) {
    throw DomainError("series '" + series.scope_id + "' has " + std::to_string(series.points.size()) +
                      " points, window needs " + std::to_string(window));
  }
  auto first = series.points.end() - static_cast<std::ptrdiff_t>(window);
  Posture out;
  out.ceiling = std::max_element(first, series.points.end(), [](const auto& a, const auto& b) {
                  return a.persisted < b.persisted;
                })->persisted;
  out.movement = series.points.back().persisted - first->persisted;
  return out;
}

}  // namespace ansc::scoring
