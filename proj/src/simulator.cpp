#include "ansc/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <tuple>

namespace ansc::sim {

using fabric::ElementState;
using hazard::IncidentRecord;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, Stream stream)
    : engine_(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(stream))) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw DomainError("uniform_int needs lo <= hi");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  // Rejection sampling keeps the draw unbiased.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

double Rng::exponential(double mean) { return -mean * std::log1p(-uniform01()); }

std::string_view to_string(SimEventKind k) {
  switch (k) {
    case SimEventKind::fail: return "fail";
    case SimEventKind::repair: return "repair";
    case SimEventKind::maintenance_start: return "maintenance_start";
    case SimEventKind::maintenance_end: return "maintenance_end";
  }
  return "fail";
}

void FleetGenSpec::check() const {
  if (n_regions < 1) throw ConfigError("n_regions must be >= 1");
  if (n_datacenters < n_regions) throw ConfigError("n_datacenters must be >= n_regions");
  if (layers_per_dc < 1) throw ConfigError("layers_per_dc must be >= 1");
  if (elements_per_layer.lo < 1 || elements_per_layer.hi < elements_per_layer.lo) {
    throw ConfigError("elements_per_layer must be a non-empty positive range");
  }
  if (element_capacity.lo < 1 || element_capacity.hi < element_capacity.lo) {
    throw ConfigError("element_capacity must be a non-empty positive range");
  }
  if (!(demand_fraction.lo > 0.0) || demand_fraction.hi < demand_fraction.lo) {
    throw ConfigError("demand_fraction must be a non-empty positive range");
  }
}

void ScenarioConfig::check() const {
  if (duration_days <= 0) throw ConfigError("duration_days must be > 0");
  if (!(tick_days > 0.0)) throw ConfigError("tick_days must be > 0");
  if (preroll_days < 0) throw ConfigError("preroll_days must be >= 0");
  if (base_fail_rate_per_year.lo < 0.0 || base_fail_rate_per_year.hi < base_fail_rate_per_year.lo) {
    throw ConfigError("base_fail_rate_per_year must be a non-negative range");
  }
  if (!(mean_repair_days > 0.0)) throw ConfigError("mean_repair_days must be > 0");
  if (!(maintenance_rate_per_year >= 0.0)) throw ConfigError("maintenance_rate_per_year must be >= 0");
  if (!(maintenance_days > 0.0)) throw ConfigError("maintenance_days must be > 0");
  if (!(hazard.lookback_years > 0.0)) throw ConfigError("lookback_years must be > 0");
  hazard.weights.check();
  budget.check();
}

hazard::HazardParams ScenarioConfig::hazard_params() const {
  auto p = hazard;
  p.horizon_years = budget.horizon_years;
  return p;
}

namespace {

std::string padded(std::int64_t value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

int digits_for(std::int64_t n) { return static_cast<int>(std::to_string(std::max<std::int64_t>(n - 1, 0)).size()); }

std::string layer_name(int index) {
  static constexpr fabric::Tier kTiers[] = {fabric::Tier::tor, fabric::Tier::agg, fabric::Tier::spine};
  std::string name(fabric::to_string(kTiers[index % 3]));
  if (index >= 3) name += "-" + std::to_string(index / 3 + 1);
  return name;
}

Timestamp from_days(Timestamp origin, double days) { return add_days(origin, days); }

constexpr std::string_view kCauses[] = {"hardware", "optics", "software", "power"};

}  // namespace

fabric::FabricTopology generate_fleet(const FleetGenSpec& spec) {
  spec.check();
  Rng rng(spec.seed, Stream::fleet);

  fabric::FabricTopology fleet;
  fleet.created_at = spec.created_at;
  const int region_width = std::max(2, digits_for(spec.n_regions));
  const int dc_width = std::max(3, digits_for(spec.n_datacenters));
  for (int r = 0; r < spec.n_regions; ++r) fleet.regions.push_back("region-" + padded(r, region_width));

  static constexpr fabric::Tier kTiers[] = {fabric::Tier::tor, fabric::Tier::agg, fabric::Tier::spine};
  for (int d = 0; d < spec.n_datacenters; ++d) {
    fabric::Datacenter dc;
    dc.id = "dc-" + padded(d, dc_width);
    dc.region_id = fleet.regions[static_cast<std::size_t>(d % spec.n_regions)];
    for (int l = 0; l < spec.layers_per_dc; ++l) {
      fabric::ClosLayer layer;
      layer.id = layer_name(l);
      layer.tier = kTiers[l % 3];
      const auto n_elements = rng.uniform_int(spec.elements_per_layer.lo, spec.elements_per_layer.hi);
      for (std::int64_t e = 0; e < n_elements; ++e) {
        fabric::CapacityElement element;
        element.id = fabric::layer_scope_id(dc.id, layer.id) + "/e" + std::to_string(e);
        element.kind = layer.tier == fabric::Tier::spine ? fabric::ElementKind::device
                                                         : fabric::ElementKind::link;
        element.capacity = rng.uniform_int(spec.element_capacity.lo, spec.element_capacity.hi);
        element.state = ElementState::up;
        layer.elements.push_back(std::move(element));
      }
      const double fraction = rng.uniform(spec.demand_fraction.lo, spec.demand_fraction.hi);
      layer.demand_forecast =
          static_cast<CapacityUnits>(std::floor(fraction * static_cast<double>(fabric::installed_capacity(layer))));
      dc.layers.push_back(std::move(layer));
    }
    fleet.datacenters.push_back(std::move(dc));
  }
  return fleet;
}

namespace {

void sort_records(std::vector<IncidentRecord>& records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start, a.element_id, a.end, a.cause) < std::tie(b.start, b.element_id, b.end, b.cause);
  });
}

}  // namespace

std::vector<IncidentRecord> generate_history(const fabric::FabricTopology& fleet,
                                             const ScenarioConfig& config, std::uint64_t seed) {
  config.check();
  Rng rates(seed, Stream::rates);
  Rng events(seed, Stream::events);
  const Timestamp origin = add_days(config.start, -config.preroll_days);
  const double span_days = config.preroll_days + config.duration_days;

  std::vector<IncidentRecord> out;
  for (const auto& dc : fleet.datacenters) {
    for (const auto& layer : dc.layers) {
      for (const auto& e : layer.elements) {
        const double rate = rates.uniform(config.base_fail_rate_per_year.lo, config.base_fail_rate_per_year.hi);
        if (rate <= 0.0) continue;
        const double mean_gap_days = kDaysPerYear / rate;
        double t = 0.0;
        while (true) {
          t += events.exponential(mean_gap_days);
          if (t >= span_days) break;
          const double repair = events.exponential(config.mean_repair_days);
          const auto cause = kCauses[events.uniform_int(0, std::size(kCauses) - 1)];
          out.push_back({e.id, from_days(origin, t), from_days(origin, t + repair), std::string(cause)});
          t += repair;
        }
      }
    }
  }
  sort_records(out);
  return out;
}

std::vector<IncidentRecord> generate_maintenance(const fabric::FabricTopology& fleet,
                                                 const ScenarioConfig& config, std::uint64_t seed) {
  config.check();
  std::vector<IncidentRecord> out;
  if (config.maintenance_rate_per_year <= 0.0) return out;
  Rng rng(seed, Stream::maintenance);
  const Timestamp origin = add_days(config.start, -config.preroll_days);
  const double span_days = config.preroll_days + config.duration_days;
  const double mean_gap_days = kDaysPerYear / config.maintenance_rate_per_year;
  for (const auto& dc : fleet.datacenters) {
    for (const auto& layer : dc.layers) {
      for (const auto& e : layer.elements) {
        double t = 0.0;
        while (true) {
          t += rng.exponential(mean_gap_days);
          if (t >= span_days) break;
          out.push_back({e.id, from_days(origin, t), from_days(origin, t + config.maintenance_days),
                         std::string(hazard::kMaintenanceCause)});
          t += config.maintenance_days;
        }
      }
    }
  }
  sort_records(out);
  return out;
}

std::vector<IncidentRecord> generate_incidents(const fabric::FabricTopology& fleet,
                                               const ScenarioConfig& config, std::uint64_t seed) {
  auto out = generate_history(fleet, config, seed);
  auto maintenance = generate_maintenance(fleet, config, seed);
  out.insert(out.end(), std::make_move_iterator(maintenance.begin()), std::make_move_iterator(maintenance.end()));
  sort_records(out);
  return out;
}

std::vector<SimEvent> events_from_history(std::span<const IncidentRecord> history) {
  std::map<std::string, std::vector<std::pair<Timestamp, Timestamp>>> failures;
  std::map<std::string, std::vector<std::pair<Timestamp, Timestamp>>> maintenance;
  for (const auto& r : history) {
    if (r.end < r.start) throw DomainError("incident for '" + r.element_id + "' ends before it starts");
    (r.is_maintenance() ? maintenance : failures)[r.element_id].emplace_back(r.start, r.end);
  }

  std::vector<SimEvent> out;
  auto emit_merged = [&out](auto& by_element, SimEventKind open, SimEventKind close) {
    for (auto& [id, spans] : by_element) {
      std::sort(spans.begin(), spans.end());
      auto current = spans.front();
      for (std::size_t i = 1; i <= spans.size(); ++i) {
        if (i < spans.size() && spans[i].first <= current.second) {
          current.second = std::max(current.second, spans[i].second);
          continue;
        }
        out.push_back({current.first, open, id});
        out.push_back({current.second, close, id});
        if (i < spans.size()) current = spans[i];
      }
    }
  };
  emit_merged(failures, SimEventKind::fail, SimEventKind::repair);
  emit_merged(maintenance, SimEventKind::maintenance_start, SimEventKind::maintenance_end);

  // At equal times, closing events go first so back-to-back windows work.
  auto rank = [](SimEventKind k) {
    switch (k) {
      case SimEventKind::repair: return 0;
      case SimEventKind::maintenance_end: return 1;
      case SimEventKind::fail: return 2;
      case SimEventKind::maintenance_start: return 3;
    }
    return 4;
  };
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return std::make_tuple(a.at, rank(a.kind), std::string_view(a.element_id)) <
           std::make_tuple(b.at, rank(b.kind), std::string_view(b.element_id));
  });
  return out;
}

Simulation::Simulation(fabric::FabricTopology fleet, std::vector<IncidentRecord> history,
                       ScenarioConfig config)
    : fleet_(std::move(fleet)), history_(std::move(history)), config_(std::move(config)) {
  config_.check();
  if (auto violations = fabric::validate(fleet_); !violations.empty()) {
    throw ValidationError("invalid fleet: " + violations.front().path + ": " + violations.front().message);
  }
  element_index_ = fabric::ElementIndex(fleet_);
  incident_index_ = hazard::IncidentIndex(history_);
  events_ = events_from_history(history_);
  total_ticks_ = static_cast<std::size_t>(std::floor(config_.duration_days / config_.tick_days + 1e-9));
  hazards_ = hazard::HazardTable(hazard::floor_failure_prob(config_.hazard.weights, config_.budget.horizon_years));

  for (const auto& dc : fleet_.datacenters) {
    for (const auto& layer : dc.layers) {
      for (const auto& e : layer.elements) {
        flags_[e.id] = {e.state == ElementState::failed, e.state == ElementState::drained};
      }
    }
  }
}

Timestamp Simulation::tick_time(std::size_t k) const {
  return add_days(config_.start, static_cast<double>(k) * config_.tick_days);
}

void Simulation::apply_events_until(Timestamp t) {
  while (next_event_ < events_.size() && events_[next_event_].at <= t) {
    const auto& ev = events_[next_event_++];
    auto ref = element_index_.find(ev.element_id);
    if (!ref) continue;  // history may mention retired elements
    auto& [failed, maintained] = flags_[ev.element_id];
    switch (ev.kind) {
      case SimEventKind::fail: failed = true; break;
      case SimEventKind::repair: failed = false; break;
      case SimEventKind::maintenance_start: maintained = true; break;
      case SimEventKind::maintenance_end: maintained = false; break;
    }
    auto& element = fleet_.datacenters[ref->dc].layers[ref->layer].elements[ref->element];
    element.state = failed ? ElementState::failed : maintained ? ElementState::drained : ElementState::up;
  }
}

const pipeline::FleetScores& Simulation::step() {
  if (done()) throw ConflictError("scenario finished after " + std::to_string(total_ticks_) + " ticks");
  const Timestamp now = tick_time(tick_);
  apply_events_until(now);

  const auto params = config_.hazard_params();
  hazards_ = hazard::estimate_hazards(fleet_, incident_index_, now, params);

  pipeline::ColorPolicy policy;
  const int year = calendar_year(now);
  if (config_.calibration == CalibrationMode::annual_freeze) {
    if (!frozen_ || frozen_year_ != year) {
      auto fresh = pipeline::score_fleet(fleet_, hazards_, config_.budget, &persistence_, now, {}, &cache_);
      frozen_ = fresh.thresholds;
      frozen_year_ = year;
    }
    policy.frozen = &*frozen_;
  }
  latest_ = pipeline::score_fleet(fleet_, hazards_, config_.budget, &persistence_, now, policy, &cache_);
  pipeline::record_persistence(persistence_, latest_, config_.tick_days);
  ++tick_;
  return latest_;
}

ScenarioResult run_scenario(fabric::FabricTopology fleet, std::vector<IncidentRecord> history,
                            const ScenarioConfig& config) {
  Simulation sim(std::move(fleet), std::move(history), config);
  ScenarioResult result;
  auto append = [&](const scoring::ScoreCard& card) {
    auto& series = result.series[card.scope_id];
    if (series.scope_id.empty()) {
      series.scope_id = card.scope_id;
      series.points.reserve(sim.total_ticks());
    }
    series.points.push_back({card.at, card.persisted, card.color});
  };
  while (!sim.done()) {
    const auto& scores = sim.step();
    const auto day = std::chrono::floor<std::chrono::days>(scores.at);
    for (const auto& c : scores.layers) append(c);
    for (const auto& c : scores.datacenters) {
      append(c);
      result.datacenter_assignments.push_back({c.scope_id, day, c.color});
    }
    for (const auto& c : scores.regions) {
      append(c);
      result.region_assignments.push_back({c.scope_id, day, c.color});
    }
  }
  result.final_scores = sim.latest();
  result.final_fleet = sim.fleet();
  return result;
}

std::vector<HeatmapRow> export_heatmap(std::span<const scoring::ScoreCard> cards,
                                       const std::map<std::string, std::string>& region_of) {
  if (!cards.empty()) {
    const auto at = cards.front().at;
    for (const auto& c : cards) {
      if (c.at != at) throw DomainError("heatmap cards span more than one timestamp");
    }
  }
  std::map<std::string, std::vector<HeatmapCell>> rows;
  for (const auto& c : cards) {
    if (c.scope != scoring::Scope::datacenter) continue;
    auto it = region_of.find(c.scope_id);
    if (it == region_of.end()) throw NotFoundError("no region known for datacenter '" + c.scope_id + "'");
    rows[it->second].push_back({c.scope_id, c.color, c.persisted});
  }
  std::vector<HeatmapRow> out;
  for (auto& [region, cells] : rows) {
    std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
      if (a.persisted != b.persisted) return a.persisted > b.persisted;
      return a.dc_id < b.dc_id;
    });
    out.push_back({region, std::move(cells)});
  }
  return out;
}

std::string heatmap_csv(const std::vector<HeatmapRow>& rows) {
  std::string out = "region,dc,persisted,color\n";
  char buf[64];
  for (const auto& row : rows) {
    for (const auto& cell : row.cells) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, cell.persisted);
      out += row.region_id + "," + cell.dc_id + "," + std::string(buf, end) + "," +
             std::string(scoring::to_string(cell.color)) + "\n";
    }
  }
  return out;
}

}  // namespace ansc::sim
