// ansc: batch pipeline and service launcher.
//
// Exit status: 0 success, 1 validation or runtime failure (and a
// non-compliant audit), 2 usage error.

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ansc/calibration.hpp"
#include "ansc/common.hpp"
#include "ansc/fabric.hpp"
#include "ansc/hazard.hpp"
#include "ansc/history_store.hpp"
#include "ansc/io.hpp"
#include "ansc/pipeline.hpp"
#include "ansc/service.hpp"
#include "ansc/simulator.hpp"
#include "ansc/whatif.hpp"

namespace fs = std::filesystem;
using namespace ansc;
using io::Json;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
  bool verbose = false;

  std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }
  bool json() const { return format == "json"; }
};

// Thrown for exit status 1 without an error message (non-compliant audit).
struct QuietFailure {};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
  } else {
    io::write_file(g.out, text);
  }
}

Timestamp parse_at(const std::string& text, Timestamp fallback) {
  return text.empty() ? fallback : parse_rfc3339(text);
}

calibration::BudgetConfig budget_or_default(const std::string& path) {
  return path.empty() ? calibration::BudgetConfig{} : io::load_budget(path);
}

Timestamp latest_timestamp(const std::vector<scoring::ScoreCard>& cards) {
  Timestamp at{};
  for (const auto& c : cards) at = std::max(at, c.at);
  return at;
}

// ---- gen-fleet ------------------------------------------------------------

struct GenFleetArgs {
  int dcs = 400;
  int regions = 60;
  int layers = 3;
  std::string created_at;
};

void run_gen_fleet(const Globals& g, const GenFleetArgs& a) {
  sim::FleetGenSpec spec;
  spec.seed = g.seed_or(spec.seed);
  spec.n_datacenters = a.dcs;
  spec.n_regions = a.regions;
  spec.layers_per_dc = a.layers;
  spec.created_at = parse_at(a.created_at, spec.created_at);
  try {
    spec.check();
  } catch (const ConfigError& e) {
    throw ValidationError(e.what());
  }
  emit(g, io::dump(io::to_json(sim::generate_fleet(spec))));
}

// ---- gen-history ----------------------------------------------------------

struct GenHistoryArgs {
  std::string fleet;
  int days = 730;
  double rate_lo = 0.1;
  double rate_hi = 1.0;
  bool no_maintenance = false;
};

// Incidents starting in the `days` before the fleet's creation time.
void run_gen_history(const Globals& g, const GenHistoryArgs& a) {
  auto fleet = io::load_fleet(a.fleet);
  if (a.days <= 0) throw ValidationError("--days must be > 0");
  sim::ScenarioConfig config;
  config.start = fleet.created_at;
  config.preroll_days = a.days;
  config.duration_days = 1;
  config.base_fail_rate_per_year = {a.rate_lo, a.rate_hi};
  if (a.no_maintenance) config.maintenance_rate_per_year = 0.0;
  try {
    config.check();
  } catch (const ConfigError& e) {
    throw ValidationError(e.what());
  }
  auto all = sim::generate_incidents(fleet, config, g.seed_or(7));
  std::vector<hazard::IncidentRecord> out;
  for (auto& r : all) {
    if (r.start < fleet.created_at) out.push_back(std::move(r));
  }
  emit(g, io::format_incidents(out));
}

// ---- score ----------------------------------------------------------------

struct ScoreArgs {
  std::string fleet;
  std::string incidents;
  std::string budget;
  std::string at;
  double lookback_years = 2.0;
};

void run_score(const Globals& g, const ScoreArgs& a) {
  auto fleet = io::load_fleet(a.fleet);
  auto incidents = io::load_incidents(a.incidents);
  auto budget = budget_or_default(a.budget);
  hazard::HazardParams params;
  params.lookback_years = a.lookback_years;
  const Timestamp at = parse_at(a.at, fleet.created_at);
  auto state = service::snapshot_from_files(std::move(fleet), incidents, budget, at, params);
  emit(g, io::dump(io::to_json(state.scores.all_cards())));
}

// ---- calibrate ------------------------------------------------------------

struct CalibrateArgs {
  std::string scores;
  std::string budget;
  std::string population = "datacenter";
};

void run_calibrate(const Globals& g, const CalibrateArgs& a) {
  auto cards = io::load_scorecards(a.scores);
  auto budget = budget_or_default(a.budget);
  auto population = calibration::parse_population(a.population);
  if (!population) throw ValidationError("--population must be datacenter or region");
  const auto scope = *population == calibration::Population::region ? scoring::Scope::region
                                                                     : scoring::Scope::datacenter;
  std::vector<calibration::ScoredSite> sites;
  for (const auto& c : cards) {
    if (c.scope == scope) sites.push_back({c.scope_id, c.persisted});
  }
  if (sites.empty()) {
    throw ValidationError(a.scores + ": no " + std::string(scoring::to_string(scope)) + " scorecards");
  }
  auto thresholds = calibration::calibrate(sites, budget, *population, latest_timestamp(cards));
  emit(g, io::dump(io::to_json(thresholds)));
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string spec;
  std::string out_dir;
};

void run_simulate(const Globals& g, const SimulateArgs& a) {
  io::ScenarioFile file;
  if (!a.spec.empty()) {
    file = io::scenario_file_from_json(io::parse_json(io::read_file(a.spec), a.spec));
  }
  if (g.seed) {
    file.fleet.seed = *g.seed;
    file.history_seed = *g.seed;
  }
  const fs::path dir = a.out_dir.empty() ? fs::path(g.out) : fs::path(a.out_dir);
  if (dir.empty()) throw CLI::ValidationError("simulate needs --out-dir");

  const auto started = std::chrono::steady_clock::now();
  auto fleet = sim::generate_fleet(file.fleet);
  auto incidents = sim::generate_incidents(fleet, file.scenario, file.history_seed);
  io::save_fleet(fleet, dir / "fleet.json");
  io::save_incidents(incidents, dir / "incidents.ndjson");
  io::write_file(dir / "scenario.json", io::dump(io::to_json(file)));

  auto result = sim::run_scenario(fleet, incidents, file.scenario);
  const auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  io::write_file(dir / "assignments.ndjson", io::format_assignments(result.datacenter_assignments));
  io::write_file(dir / "region_assignments.ndjson", io::format_assignments(result.region_assignments));
  io::save_scorecards(result.final_scores.all_cards(), dir / "scores.json");
  io::save_thresholds(result.final_scores.thresholds.datacenter, dir / "thresholds.json");
  io::save_thresholds(result.final_scores.thresholds.region, dir / "region_thresholds.json");
  io::save_fleet(result.final_fleet, dir / "final_fleet.json");

  std::string series_text;
  for (const auto& [scope, series] : result.series) series_text += io::to_json(series).dump() + "\n";
  io::write_file(dir / "series.ndjson", series_text);

  auto report = calibration::audit(result.datacenter_assignments, file.scenario.budget);
  auto region_report = calibration::audit(result.region_assignments, file.scenario.budget);
  Json summary = {{"ticks", result.series.empty() ? 0 : result.series.begin()->second.points.size()},
                  {"datacenter_audit", io::to_json(report)},
                  {"region_audit", io::to_json(region_report)}};
  io::write_file(dir / "summary.json", io::dump(summary));
  if (g.verbose) std::cerr << "simulate: " << seconds << " s\n";
  std::cout << io::dump(summary);
}

// ---- audit ----------------------------------------------------------------

struct AuditArgs {
  std::string assignments;
  std::string budget;
};

void run_audit(const Globals& g, const AuditArgs& a) {
  auto assignments = io::load_assignments(a.assignments);
  auto budget = budget_or_default(a.budget);
  auto report = calibration::audit(assignments, budget);
  if (g.format == "csv") {
    std::string text = "color,scope_days,fraction,cap,limit,compliant\n";
    for (const auto& c : report.colors) {
      text += std::string(scoring::to_string(c.color)) + "," + std::to_string(c.scope_days) + "," +
              std::to_string(c.fraction) + "," + std::to_string(c.cap) + "," + std::to_string(c.limit) + "," +
              (c.compliant ? "true" : "false") + "\n";
    }
    emit(g, text);
  } else {
    emit(g, io::dump(io::to_json(report)));
  }
  if (!report.compliant) {
    if (!g.json()) {
      for (const auto& c : report.colors) {
        if (c.compliant) continue;
        std::cerr << "audit: " << scoring::to_string(c.color) << " " << c.fraction * 100.0 << "% exceeds "
                  << c.limit * 100.0 << "%\n";
      }
    }
    throw QuietFailure{};
  }
}

// ---- heatmap --------------------------------------------------------------

struct HeatmapArgs {
  std::string scores;
  std::string fleet;
};

void run_heatmap(const Globals& g, const HeatmapArgs& a) {
  auto cards = io::load_scorecards(a.scores);
  auto fleet = io::load_fleet(a.fleet);
  auto rows = sim::export_heatmap(cards, pipeline::region_of(fleet));
  emit(g, g.json() ? io::dump(io::to_json(rows)) : sim::heatmap_csv(rows));
}

// ---- whatif ---------------------------------------------------------------

struct WhatIfArgs {
  std::string fleet;
  std::string thresholds;
  std::string region_thresholds;
  std::string actions;
  std::string incidents;
  std::string budget;
  std::string at;
  double lookback_years = 2.0;
};

void run_whatif(const Globals& g, const WhatIfArgs& a) {
  auto fleet = io::load_fleet(a.fleet);
  auto actions = io::load_actions(a.actions);
  auto budget = budget_or_default(a.budget);
  std::vector<hazard::IncidentRecord> incidents;
  if (!a.incidents.empty()) incidents = io::load_incidents(a.incidents);
  hazard::HazardParams params;
  params.lookback_years = a.lookback_years;
  const Timestamp at = parse_at(a.at, fleet.created_at);
  auto state = service::snapshot_from_files(fleet, incidents, budget, at, params);

  pipeline::ThresholdPair thresholds = state.scores.thresholds;
  thresholds.datacenter = io::load_thresholds(a.thresholds);
  if (!a.region_thresholds.empty()) thresholds.region = io::load_thresholds(a.region_thresholds);
  auto result = whatif::evaluate(state.fleet, state.hazards, thresholds, budget, actions, at);
  emit(g, io::dump(io::to_json(result)));
}

// ---- serve ----------------------------------------------------------------

struct ServeArgs {
  std::string mode = "demo";
  std::string listen = "127.0.0.1:8080";
  std::string cors_origin;
  std::string spec;
  std::string fleet;
  std::string incidents;
  std::string budget;
  std::string at;
  std::string history_dir;
};

service::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

void run_serve(const Globals& g, const ServeArgs& a) {
  auto address = service::parse_listen(a.listen);
  std::shared_ptr<HistoryStore> history =
      a.history_dir.empty() ? std::make_shared<HistoryStore>() : std::make_shared<HistoryStore>(a.history_dir);

  std::unique_ptr<service::Service> svc;
  if (a.mode == "file") {
    if (a.fleet.empty() || a.incidents.empty()) {
      throw CLI::ValidationError("file mode needs --fleet and --incidents");
    }
    auto fleet = io::load_fleet(a.fleet);
    auto incidents = io::load_incidents(a.incidents);
    const Timestamp at = parse_at(a.at, fleet.created_at);
    auto state = service::snapshot_from_files(std::move(fleet), incidents, budget_or_default(a.budget), at, {});
    svc = std::make_unique<service::Service>(std::move(state), history);
  } else {
    io::ScenarioFile file;
    if (!a.spec.empty()) file = io::scenario_file_from_json(io::parse_json(io::read_file(a.spec), a.spec));
    if (g.seed) {
      file.fleet.seed = *g.seed;
      file.history_seed = *g.seed;
    }
    auto fleet = sim::generate_fleet(file.fleet);
    auto incidents = sim::generate_incidents(fleet, file.scenario, file.history_seed);
    auto simulation = std::make_unique<sim::Simulation>(std::move(fleet), std::move(incidents), file.scenario);
    svc = std::make_unique<service::Service>(std::move(simulation), history);
  }

  service::HttpServer server(*svc, a.cors_origin);
  const int port = server.bind(address);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "ansc: serving " << a.mode << " mode on " << address.host << ":" << port << std::endl;
  server.run();
  g_server = nullptr;
}

int report_error(const Globals& g, std::string_view kind, std::string_view message) {
  if (g.json()) {
    std::cout << Json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << "\n";
  } else {
    std::cerr << "ansc: " << message << "\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity-health scoring for Clos datacenter fabrics", "ansc"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (falls back to $ANSC_SEED)")->envname("ANSC_SEED");
  app.add_option("--out", g.out, "Output file (default: standard output)");
  app.add_option("--format", g.format, "Output and error format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--verbose", g.verbose, "Print the effective configuration to standard error");

  GenFleetArgs gen_fleet;
  auto* cmd_gen_fleet = app.add_subcommand("gen-fleet", "Generate a synthetic fleet");
  cmd_gen_fleet->add_option("--dcs", gen_fleet.dcs, "Number of datacenters")->capture_default_str();
  cmd_gen_fleet->add_option("--regions", gen_fleet.regions, "Number of regions")->capture_default_str();
  cmd_gen_fleet->add_option("--layers", gen_fleet.layers, "Layers per datacenter")->capture_default_str();
  cmd_gen_fleet->add_option("--created-at", gen_fleet.created_at, "Fleet timestamp (RFC 3339)");

  GenHistoryArgs gen_history;
  auto* cmd_gen_history = app.add_subcommand("gen-history", "Generate incident history ending at the fleet timestamp");
  cmd_gen_history->add_option("--fleet", gen_history.fleet, "Fleet JSON")->required();
  cmd_gen_history->add_option("--days", gen_history.days, "Days of history")->capture_default_str();
  cmd_gen_history->add_option("--rate-lo", gen_history.rate_lo, "Lowest base failure rate per year")->capture_default_str();
  cmd_gen_history->add_option("--rate-hi", gen_history.rate_hi, "Highest base failure rate per year")->capture_default_str();
  cmd_gen_history->add_flag("--no-maintenance", gen_history.no_maintenance, "Omit maintenance windows");

  ScoreArgs score;
  auto* cmd_score = app.add_subcommand("score", "Score every layer, datacenter and region");
  cmd_score->add_option("--fleet", score.fleet, "Fleet JSON")->required();
  cmd_score->add_option("--incidents", score.incidents, "Incident NDJSON")->required();
  cmd_score->add_option("--budget", score.budget, "Budget JSON (default budget if omitted)");
  cmd_score->add_option("--at", score.at, "Scoring time (default: fleet timestamp)");
  cmd_score->add_option("--lookback-years", score.lookback_years, "Incident lookback")->capture_default_str();

  CalibrateArgs calibrate;
  auto* cmd_calibrate = app.add_subcommand("calibrate", "Derive color thresholds from scorecards");
  cmd_calibrate->add_option("--scores", calibrate.scores, "Scorecard JSON")->required();
  cmd_calibrate->add_option("--budget", calibrate.budget, "Budget JSON (default budget if omitted)");
  cmd_calibrate->add_option("--population", calibrate.population, "Scope to calibrate")
      ->check(CLI::IsMember({"datacenter", "region"}))
      ->capture_default_str();

  SimulateArgs simulate;
  auto* cmd_simulate = app.add_subcommand("simulate", "Run a tick-based fleet scenario");
  cmd_simulate->add_option("--spec", simulate.spec, "Scenario JSON {fleet, scenario, history_seed}");
  cmd_simulate->add_option("--out-dir", simulate.out_dir, "Directory for run artifacts");

  AuditArgs audit;
  auto* cmd_audit = app.add_subcommand("audit", "Check color assignments against the budget");
  cmd_audit->add_option("--assignments", audit.assignments, "Assignment NDJSON")->required();
  cmd_audit->add_option("--budget", audit.budget, "Budget JSON (default budget if omitted)");

  HeatmapArgs heatmap;
  auto* cmd_heatmap = app.add_subcommand("heatmap", "Region by datacenter heatmap (CSV unless --format json)");
  cmd_heatmap->add_option("--scores", heatmap.scores, "Scorecard JSON")->required();
  cmd_heatmap->add_option("--fleet", heatmap.fleet, "Fleet JSON for the datacenter to region mapping")->required();

  WhatIfArgs what;
  auto* cmd_whatif = app.add_subcommand("whatif", "Score hypothetical actions against fixed thresholds");
  cmd_whatif->add_option("--fleet", what.fleet, "Fleet JSON")->required();
  cmd_whatif->add_option("--thresholds", what.thresholds, "Datacenter thresholds JSON")->required();
  cmd_whatif->add_option("--region-thresholds", what.region_thresholds,
                         "Region thresholds JSON (default: calibrated on the current fleet)");
  cmd_whatif->add_option("--actions", what.actions, "Action list JSON")->required();
  cmd_whatif->add_option("--incidents", what.incidents, "Incident NDJSON (default: no history)");
  cmd_whatif->add_option("--budget", what.budget, "Budget JSON (default budget if omitted)");
  cmd_whatif->add_option("--at", what.at, "Scoring time (default: fleet timestamp)");
  cmd_whatif->add_option("--lookback-years", what.lookback_years, "Incident lookback")->capture_default_str();

  ServeArgs serve;
  auto* cmd_serve = app.add_subcommand("serve", "Run the HTTP API");
  cmd_serve->add_option("--mode", serve.mode, "file: fixed snapshot; demo: simulator-backed")
      ->check(CLI::IsMember({"file", "demo"}))
      ->capture_default_str();
  cmd_serve->add_option("--listen", serve.listen, "host:port")->capture_default_str();
  cmd_serve->add_option("--cors-origin", serve.cors_origin, "Allowed browser origin");
  cmd_serve->add_option("--spec", serve.spec, "Scenario JSON (demo mode)");
  cmd_serve->add_option("--fleet", serve.fleet, "Fleet JSON (file mode)");
  cmd_serve->add_option("--incidents", serve.incidents, "Incident NDJSON (file mode)");
  cmd_serve->add_option("--budget", serve.budget, "Budget JSON (file mode)");
  cmd_serve->add_option("--at", serve.at, "Scoring time (file mode)");
  cmd_serve->add_option("--history-dir", serve.history_dir, "Directory for per-scope score history");

  try {
    app.parse(argc, argv);
    if (seed_opt->count() > 0) g.seed = seed;
    if (g.verbose) std::cerr << app.config_to_str(true, false);

    if (cmd_gen_fleet->parsed()) {
      run_gen_fleet(g, gen_fleet);
    } else if (cmd_gen_history->parsed()) {
      run_gen_history(g, gen_history);
    } else if (cmd_score->parsed()) {
      run_score(g, score);
    } else if (cmd_calibrate->parsed()) {
      run_calibrate(g, calibrate);
    } else if (cmd_simulate->parsed()) {
      run_simulate(g, simulate);
    } else if (cmd_audit->parsed()) {
      run_audit(g, audit);
    } else if (cmd_heatmap->parsed()) {
      run_heatmap(g, heatmap);
    } else if (cmd_whatif->parsed()) {
      run_whatif(g, what);
    } else if (cmd_serve->parsed()) {
      run_serve(g, serve);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const QuietFailure&) {
    return 1;
  } catch (const Error& e) {
    return report_error(g, e.kind(), e.what());
  } catch (const std::exception& e) {
    return report_error(g, "internal", e.what());
  }
  return 0;
}
