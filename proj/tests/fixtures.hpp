#pragma once

#include <string>
#include <vector>

#include "ansc/fabric.hpp"
#include "ansc/hazard.hpp"

namespace fixtures {

using namespace ansc;

inline fabric::CapacityElement element(std::string id, CapacityUnits capacity,
                                       fabric::ElementState state = fabric::ElementState::up) {
  return {std::move(id), fabric::ElementKind::link, capacity, state};
}

inline fabric::ClosLayer layer(std::string id, std::vector<fabric::CapacityElement> elements, CapacityUnits demand,
                               fabric::Tier tier = fabric::Tier::agg) {
  return {std::move(id), tier, std::move(elements), demand};
}

// Datacenter `dc` with one layer per entry of `capacities`; each layer gets
// elements "<dc>/<layer>/e<i>" and the given demand.
inline fabric::Datacenter datacenter(const std::string& dc, const std::string& region,
                                     const std::vector<std::pair<std::string, std::vector<CapacityUnits>>>& layers,
                                     const std::vector<CapacityUnits>& demands) {
  fabric::Datacenter out{dc, region, {}};
  for (std::size_t l = 0; l < layers.size(); ++l) {
    std::vector<fabric::CapacityElement> elements;
    for (std::size_t i = 0; i < layers[l].second.size(); ++i) {
      elements.push_back(element(dc + "/" + layers[l].first + "/e" + std::to_string(i), layers[l].second[i]));
    }
    out.layers.push_back(layer(layers[l].first, std::move(elements), demands[l]));
  }
  return out;
}

// Two regions, four datacenters, two layers each.
inline fabric::FabricTopology small_fleet() {
  fabric::FabricTopology f;
  f.regions = {"r1", "r2"};
  f.created_at = make_timestamp(2026, 1, 1);
  for (auto [dc, region] : {std::pair{"dc1", "r1"}, {"dc2", "r1"}, {"dc3", "r2"}, {"dc4", "r2"}}) {
    f.datacenters.push_back(datacenter(dc, region, {{"agg", {10, 10, 10}}, {"spine", {20, 20}}}, {15, 25}));
  }
  return f;
}

inline hazard::ElementHazard hazard_with_p(std::string id, double p) { return {std::move(id), 0.0, p}; }

}  // namespace fixtures
