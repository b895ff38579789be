#pragma once

// Per-element failure probabilities and layer-level capacity-loss
// distributions.
//
// Dependence between the elements of a layer follows a beta-factor
// common-cause model. With probability q_cc = beta * min_i p_i every element
// fails together. Otherwise elements fail independently with
//   p_ind_i = (p_i - q_cc) / (1 - q_cc),
// which keeps each element's marginal failure probability at exactly p_i.

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ansc/common.hpp"
#include "ansc/fabric.hpp"

namespace ansc::hazard {

/// Incident records tagged with this cause are maintenance windows. They mark
/// an element as recently maintained and are never counted as failures.
inline constexpr std::string_view kMaintenanceCause = "maintenance";

struct IncidentRecord {
  std::string element_id;
  Timestamp start{};
  Timestamp end{};
  std::string cause;

  bool is_maintenance() const { return cause == kMaintenanceCause; }
  bool operator==(const IncidentRecord&) const = default;
};

struct ConditionWeights {
  double maintenance_multiplier = 2.0;
  int maintenance_window_days = 14;
  double min_rate_per_year = 1e-4;

  /// Throws ConfigError on out-of-range fields.
  void check() const;
  bool operator==(const ConditionWeights&) const = default;
};

struct ElementHazard {
  std::string element_id;
  double rate_per_year = 0.0;
  double p_fail_horizon = 0.0;

  bool operator==(const ElementHazard&) const = default;
};

struct LossDistribution {
  std::vector<CapacityUnits> support;  // ascending, distinct
  std::vector<double> probs;

  double probability_of(CapacityUnits loss) const;
  double total() const;
};

struct CommonCauseParam {
  double beta = 0.15;
  void check() const;
};

struct CommonCauseSplit {
  double q_cc = 0.0;
  std::vector<double> p_ind;
};

/// One element's contribution to a layer's loss: its capacity and its
/// marginal failure probability over the horizon.
struct ElementRisk {
  CapacityUnits capacity = 0;
  double p_fail = 0.0;

  bool operator==(const ElementRisk&) const = default;
};

/// rate = max(k / exposure, min_rate), with k the number of non-maintenance
/// incidents of `element_id` in `history`; p = 1 - exp(-rate * w * horizon)
/// where w is the maintenance multiplier when `recently_maintained`.
ElementHazard estimate_failure_prob(std::span<const IncidentRecord> history,
                                    std::string_view element_id, double exposure_years,
                                    double horizon_years, const ConditionWeights& weights,
                                    bool recently_maintained);

/// Horizon failure probability of an element with no incident history.
double floor_failure_prob(const ConditionWeights& weights, double horizon_years);

CommonCauseSplit split_common_cause(std::span<const double> p, double beta);

/// Exact distribution of capacity lost in a layer, by dynamic programming over
/// the total-capacity support (O(N * C_total)).
LossDistribution layer_loss_distribution(std::span<const ElementRisk> elements, double beta);

/// P(loss > c_avail - c_req); 1 when c_avail < c_req.
double violation_probability(const LossDistribution& loss, CapacityUnits c_avail,
                             CapacityUnits c_req);

/// Same value as violation_probability(layer_loss_distribution(elements, beta),
/// c_avail, c_req) but the DP only tracks losses up to the headroom and
/// accumulates the overflow mass separately. Cost is O(N * headroom).
double layer_violation_probability(std::span<const ElementRisk> elements, double beta,
                                   CapacityUnits c_avail, CapacityUnits c_req);

struct HazardParams {
  double horizon_years = 0.25;
  double lookback_years = 2.0;
  ConditionWeights weights;
};

/// Element id -> hazard. Elements without an entry get the floor hazard.
class HazardTable {
 public:
  HazardTable() = default;
  explicit HazardTable(double floor_p) : floor_p_(floor_p) {}

  void set(ElementHazard hazard);
  /// Forget an element's estimate so it reverts to the floor.
  void reset(std::string_view element_id);
  double p_fail(std::string_view element_id) const;
  const ElementHazard* find(std::string_view element_id) const;
  double floor_p() const { return floor_p_; }
  std::size_t size() const { return table_.size(); }

  /// Entries sorted by element id.
  std::vector<ElementHazard> sorted() const;

 private:
  double floor_p_ = 0.0;
  std::unordered_map<std::string, ElementHazard> table_;
};

/// Per-element sorted incident start times, split into failures and
/// maintenance windows, for repeated windowed queries.
class IncidentIndex {
 public:
  IncidentIndex() = default;
  explicit IncidentIndex(std::span<const IncidentRecord> history);

  /// Failures of `element_id` that started in [from, to).
  std::size_t failures_between(std::string_view element_id, Timestamp from, Timestamp to) const;
  /// True when a maintenance window of `element_id` started in [from, to].
  bool maintained_between(std::string_view element_id, Timestamp from, Timestamp to) const;

 private:
  struct Starts {
    std::vector<Timestamp> failures;
    std::vector<Timestamp> maintenance;
  };
  std::unordered_map<std::string, Starts> by_element_;
};

/// Hazards for every element of the fleet as of `at`, from failures that
/// started in the trailing lookback window.
HazardTable estimate_hazards(const fabric::FabricTopology& fleet, const IncidentIndex& index,
                             Timestamp at, const HazardParams& params);
HazardTable estimate_hazards(const fabric::FabricTopology& fleet,
                             std::span<const IncidentRecord> history, Timestamp at,
                             const HazardParams& params);

}  // namespace ansc::hazard
