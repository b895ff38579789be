#include "ansc/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ansc::calibration {

using scoring::Color;

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
}

std::vector<std::size_t> rank_order(std::span<const ScoredSite> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a].score != scores[b].score) return scores[a].score > scores[b].score;
    return scores[a].scope_id < scores[b].scope_id;
  });
  return order;
}

struct Buckets {
  std::size_t red_end = 0;
  std::size_t orange_end = 0;
  std::size_t amber_end = 0;
};

Buckets buckets_for(std::size_t n, const BudgetConfig& budget) {
  Buckets b;
  b.red_end = std::min(n, slots_for(budget.red_frac, n));
  b.orange_end = std::min(n, b.red_end + slots_for(budget.orange_frac, n));
  b.amber_end = std::min(n, b.orange_end + slots_for(budget.amber_frac, n));
  return b;
}

}  // namespace

void BudgetConfig::check() const {
  check_unit(red_frac, "red_frac");
  check_unit(orange_frac, "orange_frac");
  check_unit(amber_frac, "amber_frac");
  check_unit(score_floor, "score_floor");
  check_unit(beta, "beta");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
  if (!(t_pers > 0.0)) throw ConfigError("t_pers must be > 0");
  if (!(horizon_years > 0.0)) throw ConfigError("horizon_years must be > 0");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be >= 0");
}

std::string_view to_string(Population p) {
  return p == Population::datacenter ? "datacenter" : "region";
}

std::optional<Population> parse_population(std::string_view s) {
  if (s == "datacenter") return Population::datacenter;
  if (s == "region") return Population::region;
  return std::nullopt;
}

std::size_t slots_for(double frac, std::size_t n) {
  // Guard against products such as 0.07 * 100 = 7.000000000000001.
  return static_cast<std::size_t>(std::ceil(frac * static_cast<double>(n) - 1e-9));
}

Thresholds calibrate(std::span<const ScoredSite> scores, const BudgetConfig& budget,
                     Population population, Timestamp at) {
  if (scores.empty()) throw DomainError("calibrate needs a non-empty score population");
  budget.check();

  const auto order = rank_order(scores);
  const auto b = buckets_for(scores.size(), budget);
  auto cut = [&](std::size_t begin, std::size_t end, double fallback) {
    if (end <= begin) return fallback;
    return std::max(budget.score_floor, scores[order[end - 1]].score);
  };

  Thresholds t;
  t.t_red = cut(0, b.red_end, 1.0);
  t.t_orange = std::min(t.t_red, cut(b.red_end, b.orange_end, t.t_red));
  t.t_amber = std::min(t.t_orange, cut(b.orange_end, b.amber_end, t.t_orange));
  t.calibrated_at = at;
  t.population = population;
  return t;
}

std::vector<Color> assign_colors(std::span<const ScoredSite> scores, const Thresholds& thresholds,
                                 const BudgetConfig& budget) {
  std::vector<Color> out(scores.size(), Color::green);
  const auto order = rank_order(scores);
  const auto b = buckets_for(scores.size(), budget);
  for (std::size_t rank = 0; rank < b.amber_end; ++rank) {
    const double s = scores[order[rank]].score;
    Color c = Color::green;
    if (rank < b.red_end) {
      if (s >= thresholds.t_red) c = Color::red;
    } else if (rank < b.orange_end) {
      if (s >= thresholds.t_orange) c = Color::orange;
    } else if (s >= thresholds.t_amber) {
      c = Color::amber;
    }
    out[order[rank]] = c;
  }
  return out;
}

AuditReport audit(std::span<const Assignment> assignments, const BudgetConfig& budget) {
  AuditReport report;
  report.total_scope_days = assignments.size();
  const std::array<std::pair<Color, double>, 3> caps{{
      {Color::red, budget.red_frac},
      {Color::orange, budget.orange_frac},
      {Color::amber, budget.amber_frac},
  }};
  for (std::size_t i = 0; i < caps.size(); ++i) {
    auto& entry = report.colors[i];
    entry.color = caps[i].first;
    entry.cap = caps[i].second;
    entry.limit = entry.cap + budget.tolerance;
    entry.scope_days = static_cast<std::size_t>(std::count_if(
        assignments.begin(), assignments.end(), [&](const auto& a) { return a.color == entry.color; }));
    entry.fraction = assignments.empty()
                         ? 0.0
                         : static_cast<double>(entry.scope_days) / static_cast<double>(assignments.size());
    entry.compliant = entry.fraction <= entry.limit + 1e-12;
    report.compliant = report.compliant && entry.compliant;
  }
  return report;
}

}  // namespace ansc::calibration
