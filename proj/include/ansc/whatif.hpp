#pragma once

// Hypothetical remediation and removal actions scored against frozen
// thresholds. Nothing here mutates its inputs and no time passes.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ansc/calibration.hpp"
#include "ansc/fabric.hpp"
#include "ansc/hazard.hpp"
#include "ansc/pipeline.hpp"
#include "ansc/scoring.hpp"

namespace ansc::whatif {

enum class ActionKind { repair_element, drain_element, undrain_element, add_capacity, replace_element };
std::string_view to_string(ActionKind k);
std::optional<ActionKind> parse_action_kind(std::string_view s);

struct Action {
  ActionKind kind = ActionKind::repair_element;
  /// Element id, or layer scope id ("<dc>/<layer>") for add_capacity.
  std::string target;
  /// Capacity of the new element; add_capacity only.
  CapacityUnits amount = 0;

  bool operator==(const Action&) const = default;
};

struct WhatIfResult {
  /// Cards for every affected layer, datacenter and region.
  std::vector<scoring::ScoreCard> before;
  std::vector<scoring::ScoreCard> after;
  /// Set when the action list drains something: every drained element's
  /// layer keeps ES >= 0 afterwards.
  std::optional<bool> safe_to_remove;
};

/// Apply `actions` in order to a copy of the fleet and rescore the affected
/// scopes against `thresholds`.
///
/// repair sets an element up; drain/undrain toggle an operator drain;
/// replace repairs the element and drops its incident history so it scores
/// at the floor hazard; add_capacity appends a new up element of `amount`
/// units to a layer. Throws NotFoundError for unknown targets and
/// ValidationError for a non-positive amount.
WhatIfResult evaluate(const fabric::FabricTopology& fleet, const hazard::HazardTable& hazards,
                      const pipeline::ThresholdPair& thresholds,
                      const calibration::BudgetConfig& budget, std::span<const Action> actions,
                      Timestamp at, const scoring::PersistenceBook* persistence = nullptr);

/// True iff the element's layer keeps ES >= 0 with the element drained.
/// Throws PreconditionError unless the element is up.
bool removal_check(const fabric::FabricTopology& fleet, std::string_view element_id);

}  // namespace ansc::whatif
