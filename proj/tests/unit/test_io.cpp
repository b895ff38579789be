#include <filesystem>
#include <limits>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

#include "ansc/io.hpp"

using namespace ansc;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("ansc-io-" + std::to_string(std::random_device{}()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("fleet round trip") {
  auto fleet = sim::generate_fleet({});
  auto text = io::dump(io::to_json(fleet));
  auto back = io::fleet_from_json(io::parse_json(text, "fleet"));
  CHECK(back == fleet);
  CHECK(io::dump(io::to_json(back)) == text);

  TempDir dir;
  io::save_fleet(fleet, dir.path / "fleet.json");
  CHECK(io::load_fleet(dir.path / "fleet.json") == fleet);
}

TEST_CASE("fleet errors") {
  auto j = io::to_json(fixtures::small_fleet());

  SUBCASE("fractional capacity names the element") {
    j["datacenters"][0]["layers"][1]["elements"][1]["capacity"] = 2.5;
    auto msg = error_of([&] { io::fleet_from_json(j); });
    CHECK(msg.find("$.datacenters[0].layers[1].elements[1].capacity") != std::string::npos);
    CHECK(msg.find("dc1/spine/e1") != std::string::npos);
    CHECK_THROWS_AS(io::fleet_from_json(j), ParseError);
  }
  SUBCASE("empty regions fail validation") {
    j["regions"] = io::Json::array();
    CHECK_THROWS_AS(io::fleet_from_json(j), ValidationError);
  }
  SUBCASE("unknown key") {
    j["datacenters"][2]["colour"] = "red";
    auto msg = error_of([&] { io::fleet_from_json(j); });
    CHECK(msg.find("$.datacenters[2].colour") != std::string::npos);
    CHECK_THROWS_AS(io::fleet_from_json(j), ParseError);
  }
  SUBCASE("bad enum") {
    j["datacenters"][0]["layers"][0]["tier"] = "core";
    CHECK_THROWS_AS(io::fleet_from_json(j), ParseError);
  }
  SUBCASE("syntax error") {
    CHECK_THROWS_AS(io::parse_json("{\"regions\": [", "fleet.json"), ParseError);
  }
  SUBCASE("missing file") {
    auto msg = error_of([] { io::load_fleet("/nonexistent/fleet.json"); });
    CHECK(msg.find("/nonexistent/fleet.json") != std::string::npos);
  }
}

TEST_CASE("incident round trip") {
  auto fleet = sim::generate_fleet({});
  sim::ScenarioConfig config;
  config.preroll_days = 100;
  config.duration_days = 10;
  auto incidents = sim::generate_incidents(fleet, config, 3);
  REQUIRE(!incidents.empty());
  auto text = io::format_incidents(incidents);
  CHECK(io::parse_incidents(text, "incidents") == incidents);
  CHECK(io::parse_incidents("", "incidents").empty());
  CHECK(io::parse_incidents("\n\n", "incidents").empty());

  auto msg = error_of([] {
    io::parse_incidents(
        "{\"element_id\":\"a\",\"start\":\"2026-01-02T00:00:00Z\",\"end\":\"2026-01-01T00:00:00Z\",\"cause\":\"x\"}\n",
        "log.ndjson");
  });
  CHECK(msg.find("log.ndjson:1") != std::string::npos);
  msg = error_of([] { io::parse_incidents("\n{bad\n", "log.ndjson"); });
  CHECK(msg.find("log.ndjson:2") != std::string::npos);
}

TEST_CASE("scorecard round trip with infinite margin") {
  scoring::ScoreCard a{scoring::Scope::layer, "dc1/agg", std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0,
                       scoring::Color::green, make_timestamp(2026, 1, 1)};
  scoring::ScoreCard b{scoring::Scope::region, "r1", -0.25, 0.125, 1.0, 1.0, scoring::Color::red,
                       make_timestamp(2026, 1, 1)};
  std::vector<scoring::ScoreCard> cards{a, b};
  auto j = io::to_json(cards);
  CHECK(j[0]["es"].is_null());
  CHECK(io::scorecards_from_json(io::parse_json(io::dump(j), "cards")) == cards);

  auto bad = j;
  bad[1]["raw"] = 1.5;
  CHECK_THROWS_AS(io::scorecards_from_json(bad), ParseError);
}

TEST_CASE("thresholds and budget") {
  calibration::Thresholds t{0.96, 0.84, 0.64, make_timestamp(2026, 3, 1), calibration::Population::region};
  CHECK(io::thresholds_from_json(io::to_json(t)) == t);
  auto j = io::to_json(t);
  j["t_amber"] = 0.99;
  CHECK_THROWS_AS(io::thresholds_from_json(j), ValidationError);

  calibration::BudgetConfig budget;
  budget.red_frac = 0.07;
  CHECK(io::budget_from_json(io::to_json(budget)) == budget);
  auto partial = io::budget_from_json(io::parse_json("{\"red_frac\": 0.1}", "budget"));
  CHECK(partial.red_frac == 0.1);
  CHECK(partial.orange_frac == 0.12);
  CHECK_THROWS_AS(io::budget_from_json(io::parse_json("{\"red_frac\": 2}", "budget")), ValidationError);
  CHECK_THROWS_AS(io::budget_from_json(io::parse_json("{\"red\": 0.1}", "budget")), ParseError);
}

TEST_CASE("assignments") {
  std::vector<calibration::Assignment> in{
      {"dc-001", std::chrono::sys_days{std::chrono::year{2026} / 1 / 1}, scoring::Color::amber},
      {"dc-002", std::chrono::sys_days{std::chrono::year{2026} / 1 / 2}, scoring::Color::green}};
  TempDir dir;
  io::write_file(dir.path / "a.ndjson", io::format_assignments(in));
  CHECK(io::load_assignments(dir.path / "a.ndjson") == in);
  CHECK_THROWS_AS(io::assignment_from_json(io::parse_json("{\"scope_id\":\"x\",\"date\":\"2026-13-01\",\"color\":\"red\"}", "a")),
                  ParseError);
}

TEST_CASE("actions") {
  auto j = io::parse_json(R"([{"kind":"repair_element","element_id":"e1"},
                              {"kind":"add_capacity","layer_id":"dc1/agg","amount":40}])",
                          "actions");
  auto actions = io::actions_from_json(j);
  REQUIRE(actions.size() == 2);
  CHECK(actions[0] == whatif::Action{whatif::ActionKind::repair_element, "e1", 0});
  CHECK(actions[1] == whatif::Action{whatif::ActionKind::add_capacity, "dc1/agg", 40});
  io::Json round = io::Json::array();
  for (const auto& a : actions) round.push_back(io::to_json(a));
  CHECK(io::actions_from_json(round) == actions);

  CHECK_THROWS_AS(io::actions_from_json(io::parse_json(R"([{"kind":"add_capacity","layer_id":"x","amount":0}])", "a")),
                  ValidationError);
  CHECK_THROWS_AS(io::actions_from_json(io::parse_json(R"([{"kind":"nuke","element_id":"x"}])", "a")), ParseError);
}

TEST_CASE("scenario file round trip") {
  io::ScenarioFile file;
  file.fleet.seed = 9;
  file.fleet.n_datacenters = 12;
  file.fleet.n_regions = 4;
  file.scenario.duration_days = 30;
  file.scenario.calibration = sim::CalibrationMode::annual_freeze;
  file.scenario.budget.kappa = 0.75;
  file.history_seed = 123;
  auto back = io::scenario_file_from_json(io::parse_json(io::dump(io::to_json(file)), "scenario"));
  CHECK(back.fleet == file.fleet);
  CHECK(back.history_seed == 123);
  CHECK(back.scenario.duration_days == 30);
  CHECK(back.scenario.calibration == sim::CalibrationMode::annual_freeze);
  CHECK(back.scenario.budget == file.scenario.budget);
  CHECK(io::dump(io::to_json(back)) == io::dump(io::to_json(file)));

  auto defaults = io::scenario_file_from_json(io::parse_json("{}", "scenario"));
  CHECK(defaults.fleet == sim::FleetGenSpec{});
  CHECK_THROWS_AS(io::scenario_file_from_json(io::parse_json(R"({"scenario":{"duration_days":0}})", "s")),
                  ValidationError);
}

}
