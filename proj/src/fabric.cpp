#include "ansc/fabric.hpp"

#include <set>

namespace ansc::fabric {

std::string_view to_string(ElementKind k) {
  return k == ElementKind::device ? "device" : "link";
}

std::string_view to_string(ElementState s) {
  switch (s) {
    case ElementState::up: return "up";
    case ElementState::failed: return "failed";
    case ElementState::drained: return "drained";
  }
  return "up";
}

std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::tor: return "tor";
    case Tier::agg: return "agg";
    case Tier::spine: return "spine";
  }
  return "tor";
}

std::optional<ElementKind> parse_element_kind(std::string_view s) {
  if (s == "device") return ElementKind::device;
  if (s == "link") return ElementKind::link;
  return std::nullopt;
}

std::optional<ElementState> parse_element_state(std::string_view s) {
  if (s == "up") return ElementState::up;
  if (s == "failed") return ElementState::failed;
  if (s == "drained") return ElementState::drained;
  return std::nullopt;
}

std::optional<Tier> parse_tier(std::string_view s) {
  if (s == "tor") return Tier::tor;
  if (s == "agg") return Tier::agg;
  if (s == "spine") return Tier::spine;
  return std::nullopt;
}

CapacityUnits available_capacity(const ClosLayer& layer) {
  CapacityUnits total = 0;
  for (const auto& e : layer.elements) {
    if (e.state == ElementState::up && e.capacity > 0) total += e.capacity;
  }
  return total;
}

CapacityUnits installed_capacity(const ClosLayer& layer) {
  CapacityUnits total = 0;
  for (const auto& e : layer.elements) total += e.capacity;
  return total;
}

std::string layer_scope_id(std::string_view dc_id, std::string_view layer_id) {
  std::string out;
  out.reserve(dc_id.size() + layer_id.size() + 1);
  out.append(dc_id).append("/").append(layer_id);
  return out;
}

FabricTopology apply_state_change(const FabricTopology& topology, std::string_view element_id,
                                  ElementState new_state) {
  auto ref = find_element(topology, element_id);
  if (!ref) throw NotFoundError("unknown element '" + std::string(element_id) + "'");
  FabricTopology out = topology;
  out.datacenters[ref->dc].layers[ref->layer].elements[ref->element].state = new_state;
  return out;
}

std::vector<Violation> validate(const FabricTopology& topology) {
  std::vector<Violation> out;
  if (topology.regions.empty()) out.push_back({"regions", "no regions defined"});
  if (topology.datacenters.empty()) out.push_back({"datacenters", "no datacenters defined"});

  std::set<std::string, std::less<>> regions;
  for (std::size_t i = 0; i < topology.regions.size(); ++i) {
    const auto& r = topology.regions[i];
    if (r.empty()) out.push_back({"regions[" + std::to_string(i) + "]", "empty region id"});
    if (!regions.insert(r).second) out.push_back({"regions[" + r + "]", "duplicate region id '" + r + "'"});
  }

  std::set<std::string, std::less<>> dc_ids;
  std::set<std::string, std::less<>> element_ids;
  for (const auto& dc : topology.datacenters) {
    const std::string dc_path = "datacenters[" + dc.id + "]";
    if (dc.id.empty()) out.push_back({dc_path, "empty datacenter id"});
    if (!dc_ids.insert(dc.id).second) out.push_back({dc_path, "duplicate datacenter id '" + dc.id + "'"});
    if (!regions.contains(dc.region_id)) {
      out.push_back({dc_path + ".region_id", "unknown region '" + dc.region_id + "'"});
    }
    if (dc.layers.empty()) out.push_back({dc_path + ".layers", "datacenter has no layers"});

    std::set<std::string, std::less<>> layer_ids;
    for (const auto& layer : dc.layers) {
      const std::string layer_path = dc_path + ".layers[" + layer.id + "]";
      if (layer.id.empty()) out.push_back({layer_path, "empty layer id"});
      if (!layer_ids.insert(layer.id).second) {
        out.push_back({layer_path, "duplicate layer id '" + layer.id + "'"});
      }
      if (layer.elements.empty()) out.push_back({layer_path + ".elements", "layer has no elements"});
      if (layer.demand_forecast < 0) {
        out.push_back({layer_path + ".demand_forecast", "negative demand forecast"});
      }
      for (std::size_t k = 0; k < layer.elements.size(); ++k) {
        const auto& e = layer.elements[k];
        const std::string e_path = layer_path + ".elements[" + std::to_string(k) + "]";
        if (e.id.empty()) out.push_back({e_path, "empty element id"});
        if (e.capacity < 0) out.push_back({e_path + ".capacity", "negative capacity on '" + e.id + "'"});
        if (!element_ids.insert(e.id).second) {
          out.push_back({e_path, "duplicate element id '" + e.id + "'"});
        }
      }
    }
  }
  return out;
}

std::optional<ElementRef> find_element(const FabricTopology& topology, std::string_view element_id) {
  for (std::size_t d = 0; d < topology.datacenters.size(); ++d) {
    const auto& dc = topology.datacenters[d];
    for (std::size_t l = 0; l < dc.layers.size(); ++l) {
      const auto& elements = dc.layers[l].elements;
      for (std::size_t e = 0; e < elements.size(); ++e) {
        if (elements[e].id == element_id) return ElementRef{d, l, e};
      }
    }
  }
  return std::nullopt;
}

std::optional<LayerRef> find_layer(const FabricTopology& topology, std::string_view scope_id) {
  for (std::size_t d = 0; d < topology.datacenters.size(); ++d) {
    const auto& dc = topology.datacenters[d];
    if (!scope_id.starts_with(dc.id) || scope_id.size() <= dc.id.size() || scope_id[dc.id.size()] != '/') {
      continue;
    }
    auto layer_id = scope_id.substr(dc.id.size() + 1);
    for (std::size_t l = 0; l < dc.layers.size(); ++l) {
      if (dc.layers[l].id == layer_id) return LayerRef{d, l};
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> find_datacenter(const FabricTopology& topology, std::string_view dc_id) {
  for (std::size_t d = 0; d < topology.datacenters.size(); ++d) {
    if (topology.datacenters[d].id == dc_id) return d;
  }
  return std::nullopt;
}

ElementIndex::ElementIndex(const FabricTopology& topology) {
  for (std::size_t d = 0; d < topology.datacenters.size(); ++d) {
    const auto& dc = topology.datacenters[d];
    for (std::size_t l = 0; l < dc.layers.size(); ++l) {
      const auto& elements = dc.layers[l].elements;
      for (std::size_t e = 0; e < elements.size(); ++e) {
        refs_.emplace(elements[e].id, ElementRef{d, l, e});
      }
    }
  }
}

std::optional<ElementRef> ElementIndex::find(std::string_view element_id) const {
  auto it = refs_.find(std::string(element_id));
  if (it == refs_.end()) return std::nullopt;
  return it->second;
}

}  // namespace ansc::fabric
