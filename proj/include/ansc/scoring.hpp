#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ansc/common.hpp"
#include "ansc/fabric.hpp"
#include "ansc/hazard.hpp"

namespace ansc::scoring {

enum class Scope { layer, datacenter, region };

/// Ordered by severity.
enum class Color { green = 0, amber = 1, orange = 2, red = 3 };

std::string_view to_string(Scope s);
std::string_view to_string(Color c);
std::optional<Scope> parse_scope(std::string_view s);
std::optional<Color> parse_color(std::string_view s);

inline bool is_elevated(Color c) { return c != Color::green; }

struct ScoreCard {
  Scope scope = Scope::layer;
  std::string scope_id;
  double es = 0.0;  // +inf when there is no demand but capacity exists
  double p_fail = 0.0;
  double raw = 0.0;
  double persisted = 0.0;
  Color color = Color::green;
  Timestamp at{};

  bool operator==(const ScoreCard&) const = default;
};

struct PersistenceState {
  std::string scope_id;
  double elevated_days_ytd = 0.0;
  int year = 0;
};

/// Persistence state per scope id. Each scope has a single writer.
class PersistenceBook {
 public:
  /// State for `scope_id` as seen in `year`; a new year starts from zero.
  PersistenceState state(std::string_view scope_id, int year) const;
  /// Add `tick_days` to the scope's elevated time when `color` is elevated.
  void record(std::string_view scope_id, int year, Color color, double tick_days);

 private:
  std::unordered_map<std::string, PersistenceState> states_;
};

struct SeriesPoint {
  Timestamp at{};
  double persisted = 0.0;
  Color color = Color::green;

  bool operator==(const SeriesPoint&) const = default;
};

struct ScoreSeries {
  std::string scope_id;
  std::vector<SeriesPoint> points;  // strictly increasing timestamps

  bool operator==(const ScoreSeries&) const = default;
};

struct Posture {
  double ceiling = 0.0;
  double movement = 0.0;
};

/// Color cut points, t_amber <= t_orange <= t_red.
struct ColorCuts {
  double t_red = 1.0;
  double t_orange = 1.0;
  double t_amber = 1.0;
};

/// Knobs of the scoring function.
struct ScoringParams {
  double beta = 0.15;
  double t_pers = 0.10;
  double kappa = 0.5;
};

/// (c_avail - c_req) / c_req. With c_req == 0 returns +inf when c_avail > 0
/// and 0 when c_avail == 0.
double effective_safety_margin(CapacityUnits c_avail, CapacityUnits c_req);

/// 1 when the margin is already negative, otherwise the violation probability.
double raw_score(double es, double p_viol);

/// min(1, raw * (1 + kappa * overage)), overage = max(0, elevated/365 - t_pers) / t_pers.
double persistence_adjust(double raw, const PersistenceState& state, double t_pers, double kappa);

Color map_color(double persisted, const ColorCuts& cuts);

/// Memo of per-layer violation probabilities keyed by layer scope id; a hit
/// requires identical element risks, capacity, demand and beta.
class ViolationCache {
 public:
  double get(const std::string& layer_scope_id, std::span<const hazard::ElementRisk> risks,
             double beta, CapacityUnits c_avail, CapacityUnits c_req);

 private:
  struct Entry {
    std::vector<hazard::ElementRisk> risks;
    double beta = 0.0;
    CapacityUnits c_avail = 0;
    CapacityUnits c_req = 0;
    double value = 0.0;
  };
  std::unordered_map<std::string, Entry> entries_;
};

/// Scores one layer. The card's color is left green; callers color cards
/// once thresholds are known.
ScoreCard score_layer(const fabric::Datacenter& dc, const fabric::ClosLayer& layer,
                      const hazard::HazardTable& hazards, const ScoringParams& params,
                      const PersistenceBook* persistence, Timestamp at,
                      ViolationCache* cache = nullptr);

struct DatacenterScore {
  ScoreCard card;
  std::vector<ScoreCard> layers;
};

/// Layer cards plus the datacenter card, which copies the layer with the
/// highest persisted score (ties go to the smaller layer scope id).
DatacenterScore score_datacenter(const fabric::Datacenter& dc, const hazard::HazardTable& hazards,
                                 const ScoringParams& params, const PersistenceBook* persistence,
                                 Timestamp at, ViolationCache* cache = nullptr);

/// Worst member card relabeled to the region scope; ties go to the smaller
/// datacenter id.
ScoreCard score_region(std::string_view region_id, std::span<const ScoreCard> datacenters);

Posture posture_and_movement(const ScoreSeries& series, std::size_t window);

}  // namespace ansc::scoring
