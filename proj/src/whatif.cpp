#include "ansc/whatif.hpp"

#include <map>
#include <set>

namespace ansc::whatif {

using fabric::ElementState;
using scoring::ScoreCard;

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::repair_element: return "repair_element";
    case ActionKind::drain_element: return "drain_element";
    case ActionKind::undrain_element: return "undrain_element";
    case ActionKind::add_capacity: return "add_capacity";
    case ActionKind::replace_element: return "replace_element";
  }
  return "repair_element";
}

std::optional<ActionKind> parse_action_kind(std::string_view s) {
  for (auto k : {ActionKind::repair_element, ActionKind::drain_element, ActionKind::undrain_element,
                 ActionKind::add_capacity, ActionKind::replace_element}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

namespace {

struct Applied {
  fabric::FabricTopology fleet;
  hazard::HazardTable hazards;
  std::set<std::size_t> dcs;
  std::vector<fabric::LayerRef> drained_layers;
};

fabric::CapacityElement& element_at(fabric::FabricTopology& fleet, const fabric::ElementRef& ref) {
  return fleet.datacenters[ref.dc].layers[ref.layer].elements[ref.element];
}

void apply(Applied& state, const Action& action) {
  if (action.kind == ActionKind::add_capacity) {
    if (action.amount <= 0) {
      throw ValidationError("add_capacity on '" + action.target + "' needs a positive amount");
    }
    auto layer_ref = fabric::find_layer(state.fleet, action.target);
    if (!layer_ref) throw NotFoundError("unknown layer '" + action.target + "'");
    auto& layer = state.fleet.datacenters[layer_ref->dc].layers[layer_ref->layer];
    std::string id;
    for (std::size_t n = 1;; ++n) {
      id = action.target + "/added-" + std::to_string(n);
      if (!fabric::find_element(state.fleet, id)) break;
    }
    layer.elements.push_back({id, fabric::ElementKind::link, action.amount, ElementState::up});
    state.dcs.insert(layer_ref->dc);
    return;
  }

  auto ref = fabric::find_element(state.fleet, action.target);
  if (!ref) throw NotFoundError("unknown element '" + action.target + "'");
  auto& element = element_at(state.fleet, *ref);
  switch (action.kind) {
    case ActionKind::repair_element:
      element.state = ElementState::up;
      break;
    case ActionKind::drain_element:
      element.state = ElementState::drained;
      state.drained_layers.push_back({ref->dc, ref->layer});
      break;
    case ActionKind::undrain_element:
      if (element.state == ElementState::drained) element.state = ElementState::up;
      break;
    case ActionKind::replace_element:
      element.state = ElementState::up;
      state.hazards.reset(element.id);
      break;
    case ActionKind::add_capacity:
      break;
  }
  state.dcs.insert(ref->dc);
}

// Cards for the given datacenters, their layers and their whole regions.
std::vector<ScoreCard> score_scopes(const fabric::FabricTopology& fleet, const hazard::HazardTable& hazards,
                                    const std::set<std::size_t>& dcs,
                                    const pipeline::ThresholdPair& thresholds,
                                    const calibration::BudgetConfig& budget, Timestamp at,
                                    const scoring::PersistenceBook* persistence) {
  const auto params = budget.scoring_params();
  std::set<std::string> regions;
  for (auto d : dcs) regions.insert(fleet.datacenters[d].region_id);

  std::vector<ScoreCard> region_cards;
  std::vector<ScoreCard> dc_cards;
  std::vector<ScoreCard> layer_cards;
  for (const auto& region : regions) {
    std::vector<ScoreCard> members;
    for (std::size_t d = 0; d < fleet.datacenters.size(); ++d) {
      const auto& dc = fleet.datacenters[d];
      if (dc.region_id != region) continue;
      auto scored = scoring::score_datacenter(dc, hazards, params, persistence, at);
      scored.card.color = scoring::map_color(scored.card.persisted, thresholds.datacenter.cuts());
      members.push_back(scored.card);
      if (!dcs.contains(d)) continue;
      dc_cards.push_back(scored.card);
      for (auto& layer : scored.layers) {
        layer.color = scoring::map_color(layer.persisted, thresholds.datacenter.cuts());
        layer_cards.push_back(std::move(layer));
      }
    }
    auto card = scoring::score_region(region, members);
    card.color = scoring::map_color(card.persisted, thresholds.region.cuts());
    region_cards.push_back(std::move(card));
  }

  std::vector<ScoreCard> out = std::move(region_cards);
  out.insert(out.end(), dc_cards.begin(), dc_cards.end());
  out.insert(out.end(), layer_cards.begin(), layer_cards.end());
  return out;
}

}  // namespace

WhatIfResult evaluate(const fabric::FabricTopology& fleet, const hazard::HazardTable& hazards,
                      const pipeline::ThresholdPair& thresholds,
                      const calibration::BudgetConfig& budget, std::span<const Action> actions,
                      Timestamp at, const scoring::PersistenceBook* persistence) {
  budget.check();
  Applied state{fleet, hazards, {}, {}};
  for (const auto& action : actions) apply(state, action);

  WhatIfResult result;
  result.before = score_scopes(fleet, hazards, state.dcs, thresholds, budget, at, persistence);
  result.after = score_scopes(state.fleet, state.hazards, state.dcs, thresholds, budget, at, persistence);
  if (!state.drained_layers.empty()) {
    bool safe = true;
    for (const auto& ref : state.drained_layers) {
      const auto& layer = state.fleet.datacenters[ref.dc].layers[ref.layer];
      safe = safe && scoring::effective_safety_margin(fabric::available_capacity(layer),
                                                      layer.demand_forecast) >= 0.0;
    }
    result.safe_to_remove = safe;
  }
  return result;
}

bool removal_check(const fabric::FabricTopology& fleet, std::string_view element_id) {
  auto ref = fabric::find_element(fleet, element_id);
  if (!ref) throw NotFoundError("unknown element '" + std::string(element_id) + "'");
  const auto& layer = fleet.datacenters[ref->dc].layers[ref->layer];
  const auto& element = layer.elements[ref->element];
  if (element.state != ElementState::up) {
    throw PreconditionError("element '" + element.id + "' is " +
                            std::string(fabric::to_string(element.state)) + ", not up");
  }
  const CapacityUnits after = fabric::available_capacity(layer) - element.capacity;
  return scoring::effective_safety_margin(after, layer.demand_forecast) >= 0.0;
}

}  // namespace ansc::whatif
