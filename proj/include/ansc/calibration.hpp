#pragma once

// Fleet-wide normalization of color assignments against annual budgets.
//
// Caps are per color and are ceilings, not quotas: at most ceil(cap * n)
// sites receive a color, and only if their score reaches the floor.

#include <array>
#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ansc/common.hpp"
#include "ansc/scoring.hpp"

namespace ansc::calibration {

struct BudgetConfig {
  double red_frac = 0.05;
  double orange_frac = 0.12;
  double amber_frac = 0.20;
  double tolerance = 0.05;  // percentage points, applied by audit() only
  double score_floor = 0.05;
  double t_pers = 0.10;
  double horizon_years = 0.25;
  double beta = 0.15;
  double kappa = 0.5;

  void check() const;
  scoring::ScoringParams scoring_params() const { return {beta, t_pers, kappa}; }
  bool operator==(const BudgetConfig&) const = default;
};

enum class Population { datacenter, region };
std::string_view to_string(Population p);
std::optional<Population> parse_population(std::string_view s);

struct Thresholds {
  double t_red = 1.0;
  double t_orange = 1.0;
  double t_amber = 1.0;
  Timestamp calibrated_at{};
  Population population = Population::datacenter;

  scoring::ColorCuts cuts() const { return {t_red, t_orange, t_amber}; }
  bool operator==(const Thresholds&) const = default;
};

struct ScoredSite {
  std::string scope_id;
  double score = 0.0;
};

/// Number of slots ceil(frac * n) for a cap.
std::size_t slots_for(double frac, std::size_t n);

/// Sort descending by score (ties by scope id ascending) and cut red, orange
/// and amber buckets of ceil(cap * n) sites each. A bucket's threshold is the
/// lowest score inside it, raised to the floor.
Thresholds calibrate(std::span<const ScoredSite> scores, const BudgetConfig& budget,
                     Population population = Population::datacenter, Timestamp at = {});

/// Color per site, in input order. Sites are bucketed by rank as in
/// calibrate(); a site takes its bucket's color iff its score reaches the
/// bucket threshold. Ties at a cut are resolved by scope id, so flagged
/// counts never exceed the caps.
std::vector<scoring::Color> assign_colors(std::span<const ScoredSite> scores,
                                          const Thresholds& thresholds, const BudgetConfig& budget);

struct Assignment {
  std::string scope_id;
  std::chrono::sys_days date{};
  scoring::Color color = scoring::Color::green;

  bool operator==(const Assignment&) const = default;
};

struct ColorAudit {
  scoring::Color color = scoring::Color::red;
  std::size_t scope_days = 0;
  double fraction = 0.0;
  double cap = 0.0;
  double limit = 0.0;  // cap + tolerance
  bool compliant = true;
};

struct AuditReport {
  std::size_t total_scope_days = 0;
  std::array<ColorAudit, 3> colors{};  // red, orange, amber
  bool compliant = true;
};

AuditReport audit(std::span<const Assignment> assignments, const BudgetConfig& budget);

}  // namespace ansc::calibration
