#include "doctest.h"
#include "fixtures.hpp"

#include "ansc/pipeline.hpp"

using namespace ansc;
using scoring::Color;
using scoring::Scope;

namespace {

const Timestamp kAt = make_timestamp(2026, 2, 1);

hazard::HazardTable graded_hazards(const fabric::FabricTopology& fleet) {
  hazard::HazardTable table(1e-5);
  double p = 0.02;
  for (const auto& dc : fleet.datacenters) {
    for (const auto& layer : dc.layers) {
      for (const auto& e : layer.elements) table.set(fixtures::hazard_with_p(e.id, p));
    }
    p += 0.1;
  }
  return table;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("cards at every scope") {
  auto fleet = fixtures::small_fleet();
  auto scores = pipeline::score_fleet(fleet, graded_hazards(fleet), {}, nullptr, kAt);
  CHECK(scores.at == kAt);
  CHECK(scores.layers.size() == 8);
  CHECK(scores.datacenters.size() == 4);
  CHECK(scores.regions.size() == 2);

  auto all = scores.all_cards();
  REQUIRE(all.size() == 14);
  CHECK(all.front().scope == Scope::region);
  CHECK(all[2].scope == Scope::datacenter);
  CHECK(all.back().scope == Scope::layer);
  for (const auto& c : all) CHECK(c.at == kAt);

  const auto* dc4 = scores.find(Scope::datacenter, "dc4");
  REQUIRE(dc4 != nullptr);
  const auto* r2 = scores.find(Scope::region, "r2");
  REQUIRE(r2 != nullptr);
  CHECK(r2->persisted == dc4->persisted);
  CHECK(scores.find(Scope::layer, "dc1/agg") != nullptr);
  CHECK(scores.find(Scope::layer, "dc9/agg") == nullptr);

  for (const auto& dc : scores.datacenters) {
    double worst = 0.0;
    for (const auto& l : scores.layers) {
      if (l.scope_id.rfind(dc.scope_id + "/", 0) == 0) worst = std::max(worst, l.persisted);
    }
    CHECK(dc.persisted == worst);
  }
  CHECK(scores.thresholds.datacenter.population == calibration::Population::datacenter);
  CHECK(scores.thresholds.region.population == calibration::Population::region);
}

TEST_CASE("ranked coloring respects the caps") {
  auto fleet = fixtures::small_fleet();
  auto scores = pipeline::score_fleet(fleet, graded_hazards(fleet), {}, nullptr, kAt);
  int red = 0;
  for (const auto& c : scores.datacenters) red += c.color == Color::red;
  CHECK(red <= 1);
  CHECK(scores.find(Scope::datacenter, "dc4")->color == Color::red);
  CHECK(scores.find(Scope::datacenter, "dc1")->color != Color::red);
}

TEST_CASE("frozen thresholds are reused") {
  auto fleet = fixtures::small_fleet();
  pipeline::ThresholdPair frozen;
  frozen.datacenter = {0.99, 0.98, 0.97, kAt, calibration::Population::datacenter};
  frozen.region = {0.99, 0.98, 0.97, kAt, calibration::Population::region};
  auto scores = pipeline::score_fleet(fleet, graded_hazards(fleet), {}, nullptr, kAt,
                                      {&frozen, pipeline::ColorRule::threshold});
  CHECK(scores.thresholds.datacenter == frozen.datacenter);
  for (const auto& c : scores.all_cards()) CHECK(c.color == scoring::map_color(c.persisted, {0.99, 0.98, 0.97}));
}

TEST_CASE("regions without datacenters are skipped") {
  auto fleet = fixtures::small_fleet();
  fleet.regions.push_back("r3");
  auto scores = pipeline::score_fleet(fleet, graded_hazards(fleet), {}, nullptr, kAt);
  CHECK(scores.regions.size() == 2);
  CHECK(scores.find(Scope::region, "r3") == nullptr);
}

TEST_CASE("persistence is tracked per layer") {
  auto fleet = fixtures::small_fleet();
  auto scores = pipeline::score_fleet(fleet, graded_hazards(fleet), {}, nullptr, kAt);
  scoring::PersistenceBook book;
  pipeline::record_persistence(book, scores, 1.0);
  for (const auto& l : scores.layers) {
    CHECK(book.state(l.scope_id, 2026).elevated_days_ytd == (scoring::is_elevated(l.color) ? 1.0 : 0.0));
  }
  CHECK(book.state("dc1", 2026).elevated_days_ytd == 0.0);
}

TEST_CASE("region lookup") {
  auto map = pipeline::region_of(fixtures::small_fleet());
  CHECK(map.size() == 4);
  CHECK(map.at("dc3") == "r2");
}

TEST_CASE("invalid budget") {
  auto fleet = fixtures::small_fleet();
  calibration::BudgetConfig bad;
  bad.kappa = -1;
  CHECK_THROWS_AS(pipeline::score_fleet(fleet, graded_hazards(fleet), bad, nullptr, kAt), ConfigError);
}

}
