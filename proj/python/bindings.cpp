#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ansc/calibration.hpp"
#include "ansc/hazard.hpp"
#include "ansc/io.hpp"
#include "ansc/pipeline.hpp"
#include "ansc/scoring.hpp"
#include "ansc/service.hpp"
#include "ansc/simulator.hpp"
#include "ansc/whatif.hpp"

namespace py = pybind11;
using namespace ansc;

namespace {

using Risks = std::vector<std::pair<CapacityUnits, double>>;

std::vector<hazard::ElementRisk> to_risks(const Risks& elements) {
  std::vector<hazard::ElementRisk> out;
  out.reserve(elements.size());
  for (const auto& [capacity, p] : elements) out.push_back({capacity, p});
  return out;
}

calibration::BudgetConfig budget_of(const std::string& json) {
  return io::budget_from_json(io::parse_json(json.empty() ? "{}" : json, "budget"));
}

std::vector<calibration::ScoredSite> to_sites(const std::vector<std::pair<std::string, double>>& sites) {
  std::vector<calibration::ScoredSite> out;
  for (const auto& [id, score] : sites) out.push_back({id, score});
  return out;
}

service::ServiceState snapshot(const std::string& fleet_json, const std::string& incidents_ndjson,
                               const std::string& budget_json, const std::optional<std::string>& at) {
  auto fleet = io::fleet_from_json(io::parse_json(fleet_json, "fleet"));
  auto incidents = io::parse_incidents(incidents_ndjson, "incidents");
  const Timestamp when = at ? parse_rfc3339(*at) : fleet.created_at;
  return service::snapshot_from_files(std::move(fleet), incidents, budget_of(budget_json), when, {});
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capacity-health scoring core";

  auto base = py::register_exception<Error>(m, "AnscError", PyExc_ValueError);
  py::register_exception<NotFoundError>(m, "NotFoundError", base.ptr());
  py::register_exception<ConflictError>(m, "ConflictError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

  m.def("effective_safety_margin", &scoring::effective_safety_margin, py::arg("c_avail"), py::arg("c_req"));

  m.def(
      "split_common_cause",
      [](const std::vector<double>& p, double beta) {
        auto split = hazard::split_common_cause(p, beta);
        return py::make_tuple(split.q_cc, split.p_ind);
      },
      py::arg("p"), py::arg("beta"), "Returns (q_cc, p_ind).");

  m.def(
      "layer_loss_distribution",
      [](const Risks& elements, double beta) {
        auto dist = hazard::layer_loss_distribution(to_risks(elements), beta);
        return py::make_tuple(dist.support, dist.probs);
      },
      py::arg("elements"), py::arg("beta"), "elements: [(capacity, p_fail)]. Returns (support, probs).");

  m.def(
      "violation_probability",
      [](const Risks& elements, double beta, CapacityUnits c_avail, CapacityUnits c_req) {
        return hazard::layer_violation_probability(to_risks(elements), beta, c_avail, c_req);
      },
      py::arg("elements"), py::arg("beta"), py::arg("c_avail"), py::arg("c_req"));

  m.def("raw_score", &scoring::raw_score, py::arg("es"), py::arg("p_viol"));

  m.def(
      "persistence_adjust",
      [](double raw, double elevated_days, double t_pers, double kappa) {
        return scoring::persistence_adjust(raw, {"", elevated_days, 0}, t_pers, kappa);
      },
      py::arg("raw"), py::arg("elevated_days"), py::arg("t_pers") = 0.10, py::arg("kappa") = 0.5);

  m.def(
      "map_color",
      [](double persisted, double t_red, double t_orange, double t_amber) {
        return std::string(scoring::to_string(scoring::map_color(persisted, {t_red, t_orange, t_amber})));
      },
      py::arg("persisted"), py::arg("t_red"), py::arg("t_orange"), py::arg("t_amber"));

  m.def(
      "posture_and_movement",
      [](const std::vector<double>& persisted, std::size_t window) {
        scoring::ScoreSeries series;
        Timestamp t = make_timestamp(2026, 1, 1);
        for (double v : persisted) {
          series.points.push_back({t, v, scoring::Color::green});
          t += std::chrono::days(1);
        }
        auto posture = scoring::posture_and_movement(series, window);
        return py::make_tuple(posture.ceiling, posture.movement);
      },
      py::arg("persisted"), py::arg("window"), "Returns (ceiling, movement).");

  m.def(
      "calibrate",
      [](const std::vector<std::pair<std::string, double>>& sites, const std::string& budget_json,
         const std::string& population) {
        auto pop = calibration::parse_population(population);
        if (!pop) throw ValidationError("population must be datacenter or region");
        return io::to_json(calibration::calibrate(to_sites(sites), budget_of(budget_json), *pop)).dump();
      },
      py::arg("sites"), py::arg("budget_json") = "", py::arg("population") = "datacenter",
      "sites: [(scope_id, score)]. Returns thresholds JSON.");

  m.def(
      "assign_colors",
      [](const std::vector<std::pair<std::string, double>>& sites, const std::string& thresholds_json,
         const std::string& budget_json) {
        auto t = io::thresholds_from_json(io::parse_json(thresholds_json, "thresholds"));
        std::vector<std::string> out;
        for (auto c : calibration::assign_colors(to_sites(sites), t, budget_of(budget_json))) {
          out.emplace_back(scoring::to_string(c));
        }
        return out;
      },
      py::arg("sites"), py::arg("thresholds_json"), py::arg("budget_json") = "");

  m.def(
      "audit",
      [](const std::string& assignments_ndjson, const std::string& budget_json) {
        std::vector<calibration::Assignment> assignments;
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos < assignments_ndjson.size()) {
          auto nl = assignments_ndjson.find('\n', pos);
          if (nl == std::string::npos) nl = assignments_ndjson.size();
          auto line = assignments_ndjson.substr(pos, nl - pos);
          pos = nl + 1;
          ++line_no;
          if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
          const auto where = "assignments:" + std::to_string(line_no);
          assignments.push_back(io::assignment_from_json(io::parse_json(line, where), where));
        }
        return io::to_json(calibration::audit(assignments, budget_of(budget_json))).dump();
      },
      py::arg("assignments_ndjson"), py::arg("budget_json") = "");

  m.def(
      "generate_fleet",
      [](const std::string& spec_json) {
        auto spec = io::fleet_spec_from_json(io::parse_json(spec_json.empty() ? "{}" : spec_json, "spec"));
        spec.check();
        return io::to_json(sim::generate_fleet(spec)).dump();
      },
      py::arg("spec_json") = "");

  m.def(
      "generate_incidents",
      [](const std::string& fleet_json, const std::string& scenario_json, std::uint64_t seed) {
        auto fleet = io::fleet_from_json(io::parse_json(fleet_json, "fleet"));
        auto config = io::scenario_from_json(io::parse_json(scenario_json.empty() ? "{}" : scenario_json, "scenario"));
        return io::format_incidents(sim::generate_incidents(fleet, config, seed));
      },
      py::arg("fleet_json"), py::arg("scenario_json") = "", py::arg("seed") = 7);

  m.def(
      "score",
      [](const std::string& fleet_json, const std::string& incidents_ndjson, const std::string& budget_json,
         const std::optional<std::string>& at) {
        auto state = snapshot(fleet_json, incidents_ndjson, budget_json, at);
        return io::to_json(state.scores.all_cards()).dump();
      },
      py::call_guard<py::gil_scoped_release>(), py::arg("fleet_json"), py::arg("incidents_ndjson") = "", py::arg("budget_json") = "",
      py::arg("at") = std::nullopt, "Returns the scorecard JSON array.");

  m.def(
      "whatif",
      [](const std::string& fleet_json, const std::string& actions_json, const std::string& incidents_ndjson,
         const std::string& budget_json, const std::optional<std::string>& at) {
        auto state = snapshot(fleet_json, incidents_ndjson, budget_json, at);
        auto actions = io::actions_from_json(io::parse_json(actions_json, "actions"));
        auto result = whatif::evaluate(state.fleet, state.hazards, state.scores.thresholds, state.budget, actions,
                                       state.scores.at);
        return io::to_json(result).dump();
      },
      py::call_guard<py::gil_scoped_release>(), py::arg("fleet_json"), py::arg("actions_json"), py::arg("incidents_ndjson") = "",
      py::arg("budget_json") = "", py::arg("at") = std::nullopt,
      "Evaluates actions against thresholds calibrated on the current fleet.");

  m.def(
      "run_scenario",
      [](const std::string& scenario_file_json) {
        auto file = io::scenario_file_from_json(
            io::parse_json(scenario_file_json.empty() ? "{}" : scenario_file_json, "scenario"));
        io::Json out;
        {
          py::gil_scoped_release release;
          auto fleet = sim::generate_fleet(file.fleet);
          auto incidents = sim::generate_incidents(fleet, file.scenario, file.history_seed);
          auto result = sim::run_scenario(std::move(fleet), std::move(incidents), file.scenario);
          io::Json series = io::Json::object();
          for (const auto& [scope, s] : result.series) series[scope] = io::to_json(s)["points"];
          out = {{"series", std::move(series)},
                 {"final_scores", io::to_json(result.final_scores.all_cards())},
                 {"datacenter_audit", io::to_json(calibration::audit(result.datacenter_assignments,
                                                                     file.scenario.budget))},
                 {"region_audit",
                  io::to_json(calibration::audit(result.region_assignments, file.scenario.budget))}};
        }
        return out.dump();
      },
      py::arg("scenario_file_json") = "", "Returns {series, final_scores, datacenter_audit, region_audit} JSON.");
}
