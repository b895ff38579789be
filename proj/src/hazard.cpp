#include "ansc/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ansc::hazard {

namespace {

constexpr double kPruneBelow = 1e-15;
constexpr double kRenormalizeDrift = 1e-9;

ElementHazard hazard_from_count(std::string_view element_id, std::size_t k, double exposure_years,
                                double horizon_years, const ConditionWeights& weights,
                                bool recently_maintained) {
  const double rate = std::max(static_cast<double>(k) / exposure_years, weights.min_rate_per_year);
  const double weight = recently_maintained ? weights.maintenance_multiplier : 1.0;
  return {std::string(element_id), rate, -std::expm1(-rate * weight * horizon_years)};
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

}  // namespace

void ConditionWeights::check() const {
  if (!(maintenance_multiplier >= 1.0)) throw ConfigError("maintenance_multiplier must be >= 1");
  if (maintenance_window_days < 0) throw ConfigError("maintenance_window_days must be >= 0");
  if (!(min_rate_per_year > 0.0)) throw ConfigError("min_rate_per_year must be > 0");
}

void CommonCauseParam::check() const {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0, 1]");
}

double LossDistribution::probability_of(CapacityUnits loss) const {
  auto it = std::lower_bound(support.begin(), support.end(), loss);
  if (it == support.end() || *it != loss) return 0.0;
  return probs[static_cast<std::size_t>(it - support.begin())];
}

double LossDistribution::total() const {
  return std::accumulate(probs.begin(), probs.end(), 0.0);
}

ElementHazard estimate_failure_prob(std::span<const IncidentRecord> history,
                                    std::string_view element_id, double exposure_years,
                                    double horizon_years, const ConditionWeights& weights,
                                    bool recently_maintained) {
  if (!(exposure_years > 0.0)) throw DomainError("exposure_years must be > 0");
  if (!(horizon_years > 0.0)) throw DomainError("horizon_years must be > 0");
  weights.check();
  auto k = static_cast<std::size_t>(std::count_if(history.begin(), history.end(), [&](const auto& r) {
    return r.element_id == element_id && !r.is_maintenance();
  }));
  return hazard_from_count(element_id, k, exposure_years, horizon_years, weights,
                           recently_maintained);
}

double floor_failure_prob(const ConditionWeights& weights, double horizon_years) {
  return -std::expm1(-weights.min_rate_per_year * horizon_years);
}

CommonCauseSplit split_common_cause(std::span<const double> p, double beta) {
  if (p.empty()) throw DomainError("split_common_cause needs at least one probability");
  check_probability(beta, "beta");
  for (double pi : p) check_probability(pi, "failure probability");

  CommonCauseSplit out;
  out.q_cc = beta * *std::min_element(p.begin(), p.end());
  out.p_ind.resize(p.size(), 0.0);
  if (out.q_cc < 1.0) {
    const double denom = 1.0 - out.q_cc;
    for (std::size_t i = 0; i < p.size(); ++i) {
      out.p_ind[i] = std::clamp((p[i] - out.q_cc) / denom, 0.0, 1.0);
    }
  }
  return out;
}

namespace {

CommonCauseSplit split_elements(std::span<const ElementRisk> elements, double beta) {
  std::vector<double> p;
  p.reserve(elements.size());
  for (const auto& e : elements) {
    if (e.capacity < 0) throw DomainError("element capacity must be non-negative");
    p.push_back(e.p_fail);
  }
  return split_common_cause(p, beta);
}

}  // namespace

LossDistribution layer_loss_distribution(std::span<const ElementRisk> elements, double beta) {
  if (elements.empty()) throw DomainError("layer_loss_distribution needs at least one element");
  const auto split = split_elements(elements, beta);

  CapacityUnits total = 0;
  for (const auto& e : elements) total += e.capacity;

  // Independent branch: dense convolution over [0, total].
  std::vector<double> dp(static_cast<std::size_t>(total) + 1, 0.0);
  dp[0] = 1.0;
  CapacityUnits reach = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto c = elements[i].capacity;
    const double p = split.p_ind[i];
    if (c == 0 || p == 0.0) continue;
    reach += c;
    for (CapacityUnits j = reach; j >= 0; --j) {
      const double stay = dp[j] * (1.0 - p);
      const double moved = j >= c ? dp[j - c] * p : 0.0;
      dp[j] = stay + moved;
    }
  }

  for (double& v : dp) v *= 1.0 - split.q_cc;
  dp[total] += split.q_cc;

  LossDistribution out;
  for (CapacityUnits j = 0; j <= total; ++j) {
    if (dp[j] >= kPruneBelow) {
      out.support.push_back(j);
      out.probs.push_back(dp[j]);
    }
  }
  const double sum = out.total();
  if (std::abs(sum - 1.0) > kRenormalizeDrift) {
    for (double& v : out.probs) v /= sum;
  }
  return out;
}

double violation_probability(const LossDistribution& loss, CapacityUnits c_avail,
                             CapacityUnits c_req) {
  if (c_avail < 0 || c_req < 0) throw DomainError("capacities must be non-negative");
  if (c_avail < c_req) return 1.0;
  const CapacityUnits headroom = c_avail - c_req;
  auto first = std::upper_bound(loss.support.begin(), loss.support.end(), headroom);
  double tail = 0.0;
  for (auto it = first; it != loss.support.end(); ++it) {
    tail += loss.probs[static_cast<std::size_t>(it - loss.support.begin())];
  }
  return std::clamp(tail, 0.0, 1.0);
}

double layer_violation_probability(std::span<const ElementRisk> elements, double beta,
                                   CapacityUnits c_avail, CapacityUnits c_req) {
  if (elements.empty()) throw DomainError("layer_violation_probability needs at least one element");
  if (c_avail < 0 || c_req < 0) throw DomainError("capacities must be non-negative");
  if (c_avail < c_req) return 1.0;
  const auto split = split_elements(elements, beta);

  CapacityUnits total = 0;
  for (const auto& e : elements) total += e.capacity;
  const CapacityUnits headroom = c_avail - c_req;
  if (total <= headroom) return 0.0;

  // dp[j] = P(independent loss == j) for j <= headroom; `over` holds the mass
  // that has already exceeded the headroom. Once exceeded it stays exceeded.
  std::vector<double> dp(static_cast<std::size_t>(headroom) + 1, 0.0);
  dp[0] = 1.0;
  double over = 0.0;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto c = elements[i].capacity;
    const double p = split.p_ind[i];
    if (c == 0 || p == 0.0) continue;
    double crossing = 0.0;
    for (CapacityUnits j = std::max<CapacityUnits>(0, headroom - c + 1); j <= headroom; ++j) {
      crossing += dp[j];
    }
    over += p * crossing;
    for (CapacityUnits j = headroom; j >= c; --j) dp[j] = dp[j] * (1.0 - p) + dp[j - c] * p;
    for (CapacityUnits j = std::min(c - 1, headroom); j >= 0; --j) dp[j] *= 1.0 - p;
  }
  return std::clamp(split.q_cc + (1.0 - split.q_cc) * over, 0.0, 1.0);
}

void HazardTable::set(ElementHazard hazard) {
  auto it = table_.find(hazard.element_id);
  if (it == table_.end()) {
    std::string key = hazard.element_id;
    table_.emplace(std::move(key), std::move(hazard));
  } else {
    it->second.rate_per_year = hazard.rate_per_year;
    it->second.p_fail_horizon = hazard.p_fail_horizon;
  }
}

void HazardTable::reset(std::string_view element_id) {
  table_.erase(std::string(element_id));
}

double HazardTable::p_fail(std::string_view element_id) const {
  const auto* h = find(element_id);
  return h ? h->p_fail_horizon : floor_p_;
}

const ElementHazard* HazardTable::find(std::string_view element_id) const {
  auto it = table_.find(std::string(element_id));
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<ElementHazard> HazardTable::sorted() const {
  std::vector<ElementHazard> out;
  out.reserve(table_.size());
  for (const auto& [_, h] : table_) out.push_back(h);
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.element_id < b.element_id; });
  return out;
}

IncidentIndex::IncidentIndex(std::span<const IncidentRecord> history) {
  for (const auto& r : history) {
    auto& starts = by_element_[r.element_id];
    (r.is_maintenance() ? starts.maintenance : starts.failures).push_back(r.start);
  }
  for (auto& [_, starts] : by_element_) {
    std::sort(starts.failures.begin(), starts.failures.end());
    std::sort(starts.maintenance.begin(), starts.maintenance.end());
  }
}

std::size_t IncidentIndex::failures_between(std::string_view element_id, Timestamp from,
                                            Timestamp to) const {
  auto it = by_element_.find(std::string(element_id));
  if (it == by_element_.end()) return 0;
  const auto& v = it->second.failures;
  auto lo = std::lower_bound(v.begin(), v.end(), from);
  auto hi = std::lower_bound(lo, v.end(), to);
  return static_cast<std::size_t>(hi - lo);
}

bool IncidentIndex::maintained_between(std::string_view element_id, Timestamp from,
                                       Timestamp to) const {
  auto it = by_element_.find(std::string(element_id));
  if (it == by_element_.end()) return false;
  const auto& v = it->second.maintenance;
  auto lo = std::lower_bound(v.begin(), v.end(), from);
  return lo != v.end() && *lo <= to;
}

HazardTable estimate_hazards(const fabric::FabricTopology& fleet, const IncidentIndex& index,
                             Timestamp at, const HazardParams& params) {
  if (!(params.horizon_years > 0.0)) throw ConfigError("horizon_years must be > 0");
  if (!(params.lookback_years > 0.0)) throw ConfigError("lookback_years must be > 0");
  params.weights.check();

  const Timestamp window_start = add_days(at, -params.lookback_years * kDaysPerYear);
  const Timestamp maint_start = add_days(at, -static_cast<double>(params.weights.maintenance_window_days));
  HazardTable table(floor_failure_prob(params.weights, params.horizon_years));
  for (const auto& dc : fleet.datacenters) {
    for (const auto& layer : dc.layers) {
      for (const auto& e : layer.elements) {
        const auto k = index.failures_between(e.id, window_start, at);
        const bool maintained = index.maintained_between(e.id, maint_start, at);
        table.set(hazard_from_count(e.id, k, params.lookback_years, params.horizon_years,
                                    params.weights, maintained));
      }
    }
  }
  return table;
}

HazardTable estimate_hazards(const fabric::FabricTopology& fleet,
                             std::span<const IncidentRecord> history, Timestamp at,
                             const HazardParams& params) {
  return estimate_hazards(fleet, IncidentIndex(history), at, params);
}

}  // namespace ansc::hazard
