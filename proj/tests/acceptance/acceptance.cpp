// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Usage: ansc_acceptance <path-to-ansc>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "process.hpp"

#include "ansc/calibration.hpp"
#include "ansc/hazard.hpp"
#include "ansc/io.hpp"
#include "ansc/pipeline.hpp"
#include "ansc/scoring.hpp"
#include "ansc/simulator.hpp"
#include "ansc/whatif.hpp"

using namespace ansc;
using process::quote;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// ---- 1. oracle equivalence -------------------------------------------------

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> n_dist(1, 15);
  std::uniform_int_distribution<CapacityUnits> cap_dist(1, 100);
  std::uniform_real_distribution<double> p_dist(0.0, 0.6);
  const double betas[] = {0.0, 0.15, 0.5, 1.0};
  double worst_point = 0.0, worst_tail = 0.0;
  int extra_support = 0;
  for (int layer = 0; layer < 200; ++layer) {
    const double beta = betas[layer % 4];
    const int n = n_dist(rng);
    std::vector<hazard::ElementRisk> risks;
    std::vector<oracle::Element> elements;
    CapacityUnits installed = 0;
    for (int i = 0; i < n; ++i) {
      const auto cap = cap_dist(rng);
      const double p = rng() % 10 == 0 ? 0.0 : p_dist(rng);
      risks.push_back({cap, p});
      elements.push_back({cap, p});
      installed += cap;
    }
    const auto expected = oracle::loss_distribution(elements, beta);
    const auto got = hazard::layer_loss_distribution(risks, beta);
    for (const auto& [loss, p] : expected) {
      worst_point = std::max(worst_point, std::fabs(got.probability_of(loss) - static_cast<double>(p)));
    }
    for (std::size_t i = 0; i < got.support.size(); ++i) {
      if (!expected.contains(got.support[i]) && got.probs[i] > 1e-12) ++extra_support;
    }
    for (int k = 0; k < 8; ++k) {
      const CapacityUnits req = std::uniform_int_distribution<CapacityUnits>(0, installed)(rng);
      const double want = static_cast<double>(oracle::tail(expected, installed, req));
      worst_tail = std::max(worst_tail, std::fabs(hazard::violation_probability(got, installed, req) - want));
      worst_tail =
          std::max(worst_tail, std::fabs(hazard::layer_violation_probability(risks, beta, installed, req) - want));
    }
  }
  const bool pass = worst_point <= 1e-12 && worst_tail <= 1e-12 && extra_support == 0;
  return {pass, fmt("200 layers, max point error %.3g, max tail error %.3g, stray support points %d", worst_point,
                    worst_tail, extra_support)};
}

// ---- 2. marginal preservation ---------------------------------------------

Outcome marginal_preservation() {
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p(1 + rng() % 20);
    for (auto& x : p) x = u(rng);
    const double beta = trial % 5 == 0 ? 1.0 : u(rng);
    const auto split = hazard::split_common_cause(p, beta);
    for (std::size_t i = 0; i < p.size(); ++i) {
      worst = std::max(worst, std::fabs(split.q_cc + (1.0 - split.q_cc) * split.p_ind[i] - p[i]));
    }
  }
  return {worst <= 1e-12, fmt("1000 vectors, max marginal error %.3g", worst)};
}

// ---- 3. budget caps --------------------------------------------------------

Outcome budget_caps(const std::filesystem::path& run_dir) {
  std::mt19937_64 rng(3003);
  int breaches = 0;
  const std::size_t sizes[] = {10, 100, 400, 1000};
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = sizes[trial % 4];
    const int levels = 2 + static_cast<int>(rng() % 30);
    std::vector<calibration::ScoredSite> sites;
    for (std::size_t i = 0; i < n; ++i) {
      sites.push_back({fmt("s%05zu", i), static_cast<double>(rng() % (levels + 1)) / levels});
    }
    calibration::BudgetConfig budget;
    const std::size_t red = rng() % 301, orange = rng() % 301, amber = rng() % 301;
    budget.red_frac = red / 1000.0;
    budget.orange_frac = orange / 1000.0;
    budget.amber_frac = amber / 1000.0;
    const auto t = calibration::calibrate(sites, budget);
    const auto colors = calibration::assign_colors(sites, t, budget);
    auto count = [&](scoring::Color c) { return static_cast<std::size_t>(std::count(colors.begin(), colors.end(), c)); };
    breaches += count(scoring::Color::red) > oracle::cap_slots(red, n);
    breaches += count(scoring::Color::orange) > oracle::cap_slots(orange, n);
    breaches += count(scoring::Color::amber) > oracle::cap_slots(amber, n);
  }

  const calibration::BudgetConfig budget;
  std::string audit_detail;
  bool audit_ok = true;
  for (const char* file : {"assignments.ndjson", "region_assignments.ndjson"}) {
    const auto report = calibration::audit(io::load_assignments(run_dir / file), budget);
    const double red = report.colors[0].fraction, orange = report.colors[1].fraction,
                 amber = report.colors[2].fraction;
    audit_ok = audit_ok && red <= 0.10 + 1e-12 && orange <= 0.17 + 1e-12 && amber <= 0.25 + 1e-12;
    audit_detail += fmt("; %s red %.4f orange %.4f amber %.4f",
                        std::string(file) == "assignments.ndjson" ? "datacenters" : "regions", red, orange, amber);
  }
  return {breaches == 0 && audit_ok, fmt("500 populations, %d cap breaches", breaches) + audit_detail};
}

// ---- 4. ES exactness -------------------------------------------------------

Outcome safety_margin_exactness() {
  bool table = scoring::effective_safety_margin(100, 80) == 0.25 && scoring::effective_safety_margin(80, 80) == 0.0 &&
               scoring::effective_safety_margin(60, 80) == -0.25;
  std::mt19937_64 rng(4004);
  std::uniform_int_distribution<CapacityUnits> dist(1, 1'000'000'000);
  int off = 0;
  for (int trial = 0; trial < 100000; ++trial) {
    const CapacityUnits avail = dist(rng) - 1;
    const CapacityUnits req = dist(rng);
    const double es = scoring::effective_safety_margin(avail, req);
    const long double exact = static_cast<long double>(avail - req) / static_cast<long double>(req);
    const double half_ulp = (std::nextafter(es, INFINITY) - es) / 2.0;
    if (std::fabs(static_cast<long double>(es) - exact) > half_ulp * (1.0L + 1e-9L)) ++off;
  }
  return {table && off == 0, fmt("tabulated examples %s, %d of 100000 random ratios off by more than half an ulp",
                                  table ? "exact" : "WRONG", off)};
}

// ---- 5. monotonicity -------------------------------------------------------

struct RawByScope {
  std::map<std::string, double> raw;
};

RawByScope raw_of(const pipeline::FleetScores& scores) {
  RawByScope out;
  for (const auto& c : scores.all_cards()) out.raw[std::string(scoring::to_string(c.scope)) + ":" + c.scope_id] = c.raw;
  return out;
}

Outcome monotonicity() {
  std::mt19937_64 rng(5005);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const calibration::BudgetConfig budget;
  const Timestamp at = make_timestamp(2026, 1, 1);
  const char* names[] = {"raise p_fail", "raise demand", "fail element", "repair", "add capacity"};
  int violations[5] = {0, 0, 0, 0, 0};
  int trials[5] = {0, 0, 0, 0, 0};
  std::string example;

  for (int trial = 0; trial < 1000; ++trial) {
    sim::FleetGenSpec spec;
    spec.seed = 500 + trial / 50;
    spec.n_regions = 4;
    spec.n_datacenters = 12;
    spec.elements_per_layer = {3, 12};
    auto fleet = sim::generate_fleet(spec);
    hazard::HazardTable hazards(1e-4);
    std::vector<std::string> up, down;
    for (auto& dc : fleet.datacenters) {
      for (auto& layer : dc.layers) {
        for (auto& e : layer.elements) {
          hazards.set({e.id, 0.0, 0.001 + 0.3 * u(rng)});
          if (u(rng) < 0.1) {
            e.state = fabric::ElementState::failed;
            down.push_back(e.id);
          } else {
            up.push_back(e.id);
          }
        }
      }
    }
    const auto before_scores = pipeline::score_fleet(fleet, hazards, budget, nullptr, at);
    const auto before = raw_of(before_scores);

    const int kind = trial % 5;
    ++trials[kind];
    bool raising = kind <= 2;
    std::vector<std::pair<std::string, std::pair<double, double>>> pairs;
    std::string what;

    if (kind == 0) {
      const auto& id = up[rng() % up.size()];
      const double p = hazards.p_fail(id);
      hazards.set({id, 0.0, p + (1.0 - p) * 0.5 * u(rng)});
      what = "raise p of " + id;
    } else if (kind == 1) {
      auto& dc = fleet.datacenters[rng() % fleet.datacenters.size()];
      auto& layer = dc.layers[rng() % dc.layers.size()];
      layer.demand_forecast += 1 + static_cast<CapacityUnits>(rng() % (1 + layer.demand_forecast / 5));
      what = "raise demand of " + dc.id + "/" + layer.id;
    } else if (kind == 2) {
      const auto& id = up[rng() % up.size()];
      fleet = fabric::apply_state_change(fleet, id, fabric::ElementState::failed);
      what = "fail " + id;
    }
    if (kind <= 2) {
      const auto after = raw_of(pipeline::score_fleet(fleet, hazards, budget, nullptr, at));
      for (const auto& [scope, raw] : before.raw) pairs.push_back({scope, {raw, after.raw.at(scope)}});
    } else {
      std::vector<whatif::Action> actions;
      if (kind == 3 && !down.empty()) {
        actions.push_back({whatif::ActionKind::repair_element, down[rng() % down.size()], 0});
      } else {
        const auto& dc = fleet.datacenters[rng() % fleet.datacenters.size()];
        const auto& layer = dc.layers[rng() % dc.layers.size()];
        actions.push_back({whatif::ActionKind::add_capacity, fabric::layer_scope_id(dc.id, layer.id),
                           static_cast<CapacityUnits>(40 + rng() % 61)});
      }
      what = std::string(whatif::to_string(actions[0].kind)) + " " + actions[0].target;
      const auto result = whatif::evaluate(fleet, hazards, before_scores.thresholds, budget, actions, at);
      for (std::size_t i = 0; i < result.before.size(); ++i) {
        pairs.push_back({result.before[i].scope_id, {result.before[i].raw, result.after[i].raw}});
      }
    }

    for (const auto& [scope, ba] : pairs) {
      const auto [b, a] = ba;
      const bool bad = raising ? a < b - 1e-12 : a > b + 1e-12;
      if (bad) {
        ++violations[kind];
        if (example.empty()) example = fmt("first: %s moved %s from %.6g to %.6g", what.c_str(), scope.c_str(), b, a);
        break;
      }
    }
  }

  int total = 0;
  std::string detail = "1000 trials";
  for (int k = 0; k < 5; ++k) {
    total += violations[k];
    detail += fmt("; %s %d/%d", names[k], violations[k], trials[k]);
  }
  detail += fmt("; %d violating trials", total);
  if (!example.empty()) detail += "; " + example;
  return {total == 0, detail};
}

// ---- 6. determinism and scale ---------------------------------------------

struct RunTiming {
  double seconds = 0.0;
  int exit_code = -1;
  std::string stdout_text;
};

RunTiming timed_simulate(const std::string& bin, const std::string& spec, const std::filesystem::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  auto r = process::run(quote(bin) + " simulate --spec " + quote(spec) + " --out-dir " + quote(out_dir.string()));
  const auto end = std::chrono::steady_clock::now();
  return {std::chrono::duration<double>(end - start).count(), r.exit_code, r.out};
}

Outcome determinism_and_scale(const RunTiming& a, const RunTiming& b, const std::filesystem::path& dir_a,
                              const std::filesystem::path& dir_b) {
  if (a.exit_code != 0 || b.exit_code != 0) return {false, fmt("simulate exited %d and %d", a.exit_code, b.exit_code)};
  std::size_t files = 0, differing = 0, bytes = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir_a)) {
    ++files;
    const auto left = process::slurp(entry.path());
    const auto other = dir_b / entry.path().filename();
    bytes += left.size();
    if (!std::filesystem::exists(other) || process::slurp(other) != left) ++differing;
  }
  const auto fleet = io::load_fleet(dir_a / "fleet.json");
  const auto summary = io::parse_json(process::slurp(dir_a / "summary.json"), "summary");
  const bool scale = fleet.datacenters.size() == 400 && fleet.regions.size() == 60 && summary["ticks"] == 365;
  const bool pass = differing == 0 && a.stdout_text == b.stdout_text && scale && a.seconds < 120.0 && b.seconds < 120.0;
  return {pass, fmt("%zu DCs / %zu regions / %d ticks; %zu files (%zu bytes), %zu differ; runs took %.1f s and %.1f s",
                    fleet.datacenters.size(), fleet.regions.size(), summary["ticks"].get<int>(), files, bytes,
                    differing, a.seconds, b.seconds)};
}

// ---- 7. persistence budget ------------------------------------------------

Outcome persistence_budget() {
  const calibration::BudgetConfig budget;
  const double allowance = kDaysPerYear * budget.t_pers;
  int wrong = 0, checked = 0;
  for (double raw : {0.01, 0.2, 0.45, 0.8, 0.999}) {
    // One single-element layer whose violation probability is `raw`.
    fabric::Datacenter dc{"dc1", "r1", {{"agg", fabric::Tier::agg, {{"dc1/agg/e0", fabric::ElementKind::link, 10,
                                                                        fabric::ElementState::up}},
                                         10}}};
    hazard::HazardTable hazards;
    hazards.set({"dc1/agg/e0", 0.0, raw});
    scoring::PersistenceBook book;
    Timestamp at = make_timestamp(2026, 1, 1);
    for (int day = 0; day < 365; ++day) {
      const auto card = scoring::score_layer(dc, dc.layers[0], hazards, budget.scoring_params(), &book, at);
      const double elevated = book.state(card.scope_id, 2026).elevated_days_ytd;
      bool ok;
      if (elevated <= allowance) {
        ok = card.persisted == card.raw;
      } else {
        ok = card.persisted > card.raw || (card.persisted == 1.0 && card.raw < 1.0);
      }
      ++checked;
      wrong += !ok;
      book.record(card.scope_id, 2026, scoring::Color::amber, 1.0);
      at += std::chrono::days(1);
    }
  }
  return {wrong == 0, fmt("%d constructed points around the %.1f-day allowance, %d wrong", checked, allowance, wrong)};
}

// ---- 8. CLI pipeline -------------------------------------------------------

Outcome cli_pipeline(const std::string& bin) {
  process::TempDir dir("ansc-accept");
  const auto fleet = dir.file("fleet.json");
  const auto incidents = dir.file("incidents.ndjson");
  const auto scores = dir.file("scores.json");
  const auto thresholds = dir.file("thresholds.json");
  const auto heatmap = dir.file("heatmap.csv");
  const auto spec = dir.file("scenario.json");
  const auto run = dir.file("run");
  io::write_file(spec, R"({"fleet":{"seed":42,"n_regions":6,"n_datacenters":40},"scenario":{"duration_days":30}})");

  const std::vector<std::pair<std::string, std::string>> stages{
      {"gen-fleet", "--seed 42 --out " + quote(fleet) + " gen-fleet"},
      {"gen-history", "--seed 42 --out " + quote(incidents) + " gen-history --fleet " + quote(fleet)},
      {"score", "--out " + quote(scores) + " score --fleet " + quote(fleet) + " --incidents " + quote(incidents)},
      {"calibrate", "--out " + quote(thresholds) + " calibrate --scores " + quote(scores)},
      {"heatmap", "--out " + quote(heatmap) + " heatmap --scores " + quote(scores) + " --fleet " + quote(fleet)},
      {"simulate", "simulate --spec " + quote(spec) + " --out-dir " + quote(run)},
      {"audit", "audit --assignments " + quote(run + "/assignments.ndjson")},
  };
  for (const auto& [name, args] : stages) {
    auto r = process::run(quote(bin) + " " + args);
    if (r.exit_code != 0) return {false, name + " exited " + std::to_string(r.exit_code) + ": " + r.err};
  }

  std::vector<std::string> failed;
  auto same = [&](const std::string& name, const std::string& path, const std::string& rewritten) {
    if (process::slurp(path) != rewritten) failed.push_back(name);
  };
  try {
    same("fleet", fleet, io::dump(io::to_json(io::load_fleet(fleet))));
    same("incidents", incidents, io::format_incidents(io::load_incidents(incidents)));
    const auto cards = io::load_scorecards(scores);
    same("scores", scores, io::dump(io::to_json(cards)));
    same("thresholds", thresholds, io::dump(io::to_json(io::load_thresholds(thresholds))));
    same("heatmap", heatmap,
         sim::heatmap_csv(sim::export_heatmap(cards, pipeline::region_of(io::load_fleet(fleet)))));
    same("assignments", run + "/assignments.ndjson",
         io::format_assignments(io::load_assignments(run + "/assignments.ndjson")));
  } catch (const Error& e) {
    return {false, std::string("loader failed: ") + e.what()};
  }
  std::string detail = "7 stages exited 0; 6 files re-serialized";
  if (!failed.empty()) {
    detail += "; differing:";
    for (const auto& f : failed) detail += " " + f;
  } else {
    detail += " byte-identically";
  }
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: " << argv[0] << " <path-to-ansc>\n";
    return 2;
  }
  const std::string bin = argv[1];

  process::TempDir runs("ansc-accept-runs");
  io::write_file(runs.file("default.json"), "{}");
  const auto dir_a = runs.path / "a";
  const auto dir_b = runs.path / "b";
  const auto first = timed_simulate(bin, runs.file("default.json"), dir_a);
  const auto second = timed_simulate(bin, runs.file("default.json"), dir_b);

  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence", oracle_equivalence},
      {2, "marginal preservation", marginal_preservation},
      {3, "budget caps", [&] { return budget_caps(dir_a); }},
      {4, "safety margin exactness", safety_margin_exactness},
      {5, "monotonicity", monotonicity},
      {6, "determinism and scale", [&] { return determinism_and_scale(first, second, dir_a, dir_b); }},
      {7, "persistence budget", persistence_budget},
      {8, "CLI pipeline", [&] { return cli_pipeline(bin); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
