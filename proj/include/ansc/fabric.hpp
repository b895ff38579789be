#pragma once

// Fleet model: regions -> datacenters -> Clos layers -> capacity elements.
//
// Element ids are unique across the fleet. Layer ids are unique within a
// datacenter; a layer's fleet-wide scope id is "<dc id>/<layer id>".

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ansc/common.hpp"

namespace ansc::fabric {

enum class ElementKind { device, link };
enum class ElementState { up, failed, drained };
enum class Tier { tor, agg, spine };

std::string_view to_string(ElementKind k);
std::string_view to_string(ElementState s);
std::string_view to_string(Tier t);
std::optional<ElementKind> parse_element_kind(std::string_view s);
std::optional<ElementState> parse_element_state(std::string_view s);
std::optional<Tier> parse_tier(std::string_view s);

struct CapacityElement {
  std::string id;
  ElementKind kind = ElementKind::link;
  CapacityUnits capacity = 0;
  ElementState state = ElementState::up;

  bool operator==(const CapacityElement&) const = default;
};

struct ClosLayer {
  std::string id;
  Tier tier = Tier::tor;
  std::vector<CapacityElement> elements;
  CapacityUnits demand_forecast = 0;

  bool operator==(const ClosLayer&) const = default;
};

struct Datacenter {
  std::string id;
  std::string region_id;
  std::vector<ClosLayer> layers;

  bool operator==(const Datacenter&) const = default;
};

struct FabricTopology {
  std::vector<std::string> regions;
  std::vector<Datacenter> datacenters;
  Timestamp created_at{};

  bool operator==(const FabricTopology&) const = default;
};

/// Breach of a topology invariant. `path` locates the offending entity,
/// e.g. `datacenters[dc1].layers[agg].elements[3]`.
struct Violation {
  std::string path;
  std::string message;
};

/// Sum of capacity over elements that are up.
CapacityUnits available_capacity(const ClosLayer& layer);
CapacityUnits installed_capacity(const ClosLayer& layer);

std::string layer_scope_id(std::string_view dc_id, std::string_view layer_id);

/// Copy of `topology` with one element's state replaced.
/// Throws NotFoundError for an unknown id.
FabricTopology apply_state_change(const FabricTopology& topology, std::string_view element_id,
                                  ElementState new_state);

std::vector<Violation> validate(const FabricTopology& topology);

struct ElementRef {
  std::size_t dc = 0;
  std::size_t layer = 0;
  std::size_t element = 0;
};

struct LayerRef {
  std::size_t dc = 0;
  std::size_t layer = 0;
};

std::optional<ElementRef> find_element(const FabricTopology& topology, std::string_view element_id);
std::optional<LayerRef> find_layer(const FabricTopology& topology, std::string_view layer_scope_id);
std::optional<std::size_t> find_datacenter(const FabricTopology& topology, std::string_view dc_id);

/// Hash index over element ids. Positions are invalidated by any structural
/// change to the topology it was built from.
class ElementIndex {
 public:
  ElementIndex() = default;
  explicit ElementIndex(const FabricTopology& topology);

  std::optional<ElementRef> find(std::string_view element_id) const;
  std::size_t size() const { return refs_.size(); }

 private:
  std::unordered_map<std::string, ElementRef> refs_;
};

}  // namespace ansc::fabric
