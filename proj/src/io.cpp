#include "ansc/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ansc::io {

namespace {

using fabric::FabricTopology;

std::string key_path(const std::string& base, std::string_view key) {
  return base + "." + std::string(key);
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

// Strict view over a JSON object: unknown keys are rejected on construction
// and every accessor reports the full path of a bad value.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path, std::initializer_list<std::string_view> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ParseError(path_ + ": expected an object");
    for (const auto& [key, _] : j.items()) {
      bool known = false;
      for (auto a : allowed) known = known || a == key;
      if (!known) throw ParseError(key_path(path_, key) + ": unknown key");
    }
  }

  const std::string& path() const { return path_; }
  std::string path(std::string_view key) const { return key_path(path_, key); }

  const Json* find(std::string_view key) const {
    auto it = j_.find(std::string(key));
    return it == j_.end() ? nullptr : &*it;
  }

  const Json& at(std::string_view key) const {
    const auto* v = find(key);
    if (!v) throw ParseError(path(key) + ": missing required key");
    return *v;
  }

  std::string string(std::string_view key) const {
    const auto& v = at(key);
    if (!v.is_string()) throw ParseError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  double number(std::string_view key) const { return as_number(at(key), path(key)); }

  double number_or(std::string_view key, double fallback) const {
    const auto* v = find(key);
    return v ? as_number(*v, path(key)) : fallback;
  }

  std::int64_t integer(std::string_view key) const { return as_integer(at(key), path(key)); }

  std::int64_t integer_or(std::string_view key, std::int64_t fallback) const {
    const auto* v = find(key);
    return v ? as_integer(*v, path(key)) : fallback;
  }

  Timestamp timestamp(std::string_view key) const {
    auto text = string(key);
    try {
      return parse_rfc3339(text);
    } catch (const ParseError& e) {
      throw ParseError(path(key) + ": " + e.what());
    }
  }

  static double as_number(const Json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path + ": expected a number");
    return v.get<double>();
  }

  static std::int64_t as_integer(const Json& v, const std::string& path) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number()) throw ParseError(path + ": expected an integer, got " + v.dump());
    throw ParseError(path + ": expected an integer");
  }

 private:
  const Json& j_;
  std::string path_;
};

const Json& expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  return j;
}

Json es_to_json(double es) {
  if (std::isinf(es)) return nullptr;
  return es;
}

template <typename T, typename Parse>
T parse_enum(const ObjectReader& r, std::string_view key, Parse parse) {
  auto text = r.string(key);
  auto value = parse(text);
  if (!value) throw ParseError(r.path(key) + ": unrecognized value '" + text + "'");
  return *value;
}

template <typename Fn>
auto with_origin(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Json range_to_json(double lo, double hi) { return Json::array({lo, hi}); }
Json range_to_json(std::int64_t lo, std::int64_t hi) { return Json::array({lo, hi}); }

sim::RealRange real_range(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected [lo, hi]");
  return {ObjectReader::as_number(j[0], path + "[0]"), ObjectReader::as_number(j[1], path + "[1]")};
}

sim::IntRange int_range(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected [lo, hi]");
  return {ObjectReader::as_integer(j[0], path + "[0]"), ObjectReader::as_integer(j[1], path + "[1]")};
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    out.emplace_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw NotFoundError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

Json parse_json(std::string_view text, std::string_view origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string(origin) + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- fleet ----------------------------------------------------------------

Json to_json(const FabricTopology& fleet) {
  Json dcs = Json::array();
  for (const auto& dc : fleet.datacenters) {
    Json layers = Json::array();
    for (const auto& layer : dc.layers) {
      Json elements = Json::array();
      for (const auto& e : layer.elements) {
        elements.push_back({{"id", e.id},
                            {"kind", fabric::to_string(e.kind)},
                            {"capacity", e.capacity},
                            {"state", fabric::to_string(e.state)}});
      }
      layers.push_back({{"id", layer.id},
                        {"tier", fabric::to_string(layer.tier)},
                        {"demand_forecast", layer.demand_forecast},
                        {"elements", std::move(elements)}});
    }
    dcs.push_back({{"id", dc.id}, {"region_id", dc.region_id}, {"layers", std::move(layers)}});
  }
  return Json{{"regions", fleet.regions},
              {"datacenters", std::move(dcs)},
              {"created_at", format_rfc3339(fleet.created_at)}};
}

FabricTopology fleet_from_json(const Json& j) {
  ObjectReader top(j, "$", {"regions", "datacenters", "created_at"});
  FabricTopology fleet;
  const auto& regions = expect_array(top.at("regions"), top.path("regions"));
  for (std::size_t i = 0; i < regions.size(); ++i) {
    if (!regions[i].is_string()) throw ParseError(index_path(top.path("regions"), i) + ": expected a string");
    fleet.regions.push_back(regions[i].get<std::string>());
  }
  if (top.find("created_at")) fleet.created_at = top.timestamp("created_at");

  const auto& dcs = expect_array(top.at("datacenters"), top.path("datacenters"));
  for (std::size_t d = 0; d < dcs.size(); ++d) {
    ObjectReader dr(dcs[d], index_path(top.path("datacenters"), d), {"id", "region_id", "layers"});
    fabric::Datacenter dc;
    dc.id = dr.string("id");
    dc.region_id = dr.string("region_id");
    const auto& layers = expect_array(dr.at("layers"), dr.path("layers"));
    for (std::size_t l = 0; l < layers.size(); ++l) {
      ObjectReader lr(layers[l], index_path(dr.path("layers"), l), {"id", "tier", "demand_forecast", "elements"});
      fabric::ClosLayer layer;
      layer.id = lr.string("id");
      layer.tier = parse_enum<fabric::Tier>(lr, "tier", fabric::parse_tier);
      layer.demand_forecast = lr.integer("demand_forecast");
      const auto& elements = expect_array(lr.at("elements"), lr.path("elements"));
      for (std::size_t k = 0; k < elements.size(); ++k) {
        ObjectReader er(elements[k], index_path(lr.path("elements"), k), {"id", "kind", "capacity", "state"});
        fabric::CapacityElement e;
        e.id = er.string("id");
        e.kind = parse_enum<fabric::ElementKind>(er, "kind", fabric::parse_element_kind);
        try {
          e.capacity = er.integer("capacity");
        } catch (const ParseError& err) {
          throw ParseError(std::string(err.what()) + " (element '" + e.id + "')");
        }
        e.state = parse_enum<fabric::ElementState>(er, "state", fabric::parse_element_state);
        layer.elements.push_back(std::move(e));
      }
      dc.layers.push_back(std::move(layer));
    }
    fleet.datacenters.push_back(std::move(dc));
  }

  if (auto violations = fabric::validate(fleet); !violations.empty()) {
    std::string msg = "fleet has " + std::to_string(violations.size()) + " violation(s):";
    for (const auto& v : violations) msg += " " + v.path + ": " + v.message + ";";
    msg.pop_back();
    throw ValidationError(msg);
  }
  return fleet;
}

FabricTopology load_fleet(const std::filesystem::path& path) {
  return with_origin(path, [&] { return fleet_from_json(parse_json(read_file(path), path.string())); });
}

void save_fleet(const FabricTopology& fleet, const std::filesystem::path& path) {
  write_file(path, dump(to_json(fleet)));
}

Json to_json(const std::vector<fabric::Violation>& violations) {
  Json out = Json::array();
  for (const auto& v : violations) out.push_back({{"path", v.path}, {"message", v.message}});
  return out;
}

// ---- incidents ------------------------------------------------------------

Json to_json(const hazard::IncidentRecord& r) {
  return {{"element_id", r.element_id},
          {"start", format_rfc3339(r.start)},
          {"end", format_rfc3339(r.end)},
          {"cause", r.cause}};
}

hazard::IncidentRecord incident_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path, {"element_id", "start", "end", "cause"});
  hazard::IncidentRecord out;
  out.element_id = r.string("element_id");
  if (out.element_id.empty()) throw ParseError(r.path("element_id") + ": empty element id");
  out.start = r.timestamp("start");
  out.end = r.timestamp("end");
  if (out.end < out.start) throw ParseError(r.path("end") + ": incident ends before it starts");
  out.cause = r.find("cause") ? r.string("cause") : "";
  return out;
}

std::vector<hazard::IncidentRecord> parse_incidents(std::string_view ndjson, std::string_view origin) {
  std::vector<hazard::IncidentRecord> out;
  auto lines = split_lines(ndjson);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(i + 1);
    out.push_back(incident_from_json(parse_json(lines[i], where), where));
  }
  return out;
}

std::string format_incidents(const std::vector<hazard::IncidentRecord>& records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

std::vector<hazard::IncidentRecord> load_incidents(const std::filesystem::path& path) {
  return parse_incidents(read_file(path), path.string());
}

void save_incidents(const std::vector<hazard::IncidentRecord>& records, const std::filesystem::path& path) {
  write_file(path, format_incidents(records));
}

// ---- scorecards -----------------------------------------------------------

Json to_json(const scoring::ScoreCard& c) {
  return {{"scope", scoring::to_string(c.scope)},
          {"scope_id", c.scope_id},
          {"es", es_to_json(c.es)},
          {"p_fail", c.p_fail},
          {"raw", c.raw},
          {"persisted", c.persisted},
          {"color", scoring::to_string(c.color)},
          {"at", format_rfc3339(c.at)}};
}

scoring::ScoreCard scorecard_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path, {"scope", "scope_id", "es", "p_fail", "raw", "persisted", "color", "at"});
  scoring::ScoreCard c;
  c.scope = parse_enum<scoring::Scope>(r, "scope", scoring::parse_scope);
  c.scope_id = r.string("scope_id");
  c.es = r.at("es").is_null() ? std::numeric_limits<double>::infinity() : r.number("es");
  c.p_fail = r.number("p_fail");
  c.raw = r.number("raw");
  c.persisted = r.number("persisted");
  for (auto [key, v] : {std::pair{"p_fail", c.p_fail}, {"raw", c.raw}, {"persisted", c.persisted}}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ParseError(r.path(key) + ": must lie in [0, 1]");
  }
  c.color = parse_enum<scoring::Color>(r, "color", scoring::parse_color);
  c.at = r.timestamp("at");
  return c;
}

Json to_json(const std::vector<scoring::ScoreCard>& cards) {
  Json out = Json::array();
  for (const auto& c : cards) out.push_back(to_json(c));
  return out;
}

std::vector<scoring::ScoreCard> scorecards_from_json(const Json& j) {
  expect_array(j, "$");
  std::vector<scoring::ScoreCard> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(scorecard_from_json(j[i], index_path("$", i)));
  return out;
}

std::vector<scoring::ScoreCard> load_scorecards(const std::filesystem::path& path) {
  return with_origin(path, [&] { return scorecards_from_json(parse_json(read_file(path), path.string())); });
}

void save_scorecards(const std::vector<scoring::ScoreCard>& cards, const std::filesystem::path& path) {
  write_file(path, dump(to_json(cards)));
}

// ---- thresholds and budget ------------------------------------------------

Json to_json(const calibration::Thresholds& t) {
  return {{"t_red", t.t_red},
          {"t_orange", t.t_orange},
          {"t_amber", t.t_amber},
          {"calibrated_at", format_rfc3339(t.calibrated_at)},
          {"population", calibration::to_string(t.population)}};
}

calibration::Thresholds thresholds_from_json(const Json& j) {
  ObjectReader r(j, "$", {"t_red", "t_orange", "t_amber", "calibrated_at", "population"});
  calibration::Thresholds t;
  t.t_red = r.number("t_red");
  t.t_orange = r.number("t_orange");
  t.t_amber = r.number("t_amber");
  t.calibrated_at = r.timestamp("calibrated_at");
  t.population = parse_enum<calibration::Population>(r, "population", calibration::parse_population);
  if (!(0.0 <= t.t_amber && t.t_amber <= t.t_orange && t.t_orange <= t.t_red && t.t_red <= 1.0)) {
    throw ValidationError("thresholds must satisfy 0 <= t_amber <= t_orange <= t_red <= 1");
  }
  return t;
}

calibration::Thresholds load_thresholds(const std::filesystem::path& path) {
  return with_origin(path, [&] { return thresholds_from_json(parse_json(read_file(path), path.string())); });
}

void save_thresholds(const calibration::Thresholds& t, const std::filesystem::path& path) {
  write_file(path, dump(to_json(t)));
}

Json to_json(const calibration::BudgetConfig& b) {
  return {{"red_frac", b.red_frac},       {"orange_frac", b.orange_frac},
          {"amber_frac", b.amber_frac},   {"tolerance", b.tolerance},
          {"score_floor", b.score_floor}, {"t_pers", b.t_pers},
          {"horizon_years", b.horizon_years}, {"beta", b.beta},
          {"kappa", b.kappa}};
}

calibration::BudgetConfig budget_from_json(const Json& j) {
  ObjectReader r(j, "$", {"red_frac", "orange_frac", "amber_frac", "tolerance", "score_floor", "t_pers",
                          "horizon_years", "beta", "kappa"});
  calibration::BudgetConfig b;
  b.red_frac = r.number_or("red_frac", b.red_frac);
  b.orange_frac = r.number_or("orange_frac", b.orange_frac);
  b.amber_frac = r.number_or("amber_frac", b.amber_frac);
  b.tolerance = r.number_or("tolerance", b.tolerance);
  b.score_floor = r.number_or("score_floor", b.score_floor);
  b.t_pers = r.number_or("t_pers", b.t_pers);
  b.horizon_years = r.number_or("horizon_years", b.horizon_years);
  b.beta = r.number_or("beta", b.beta);
  b.kappa = r.number_or("kappa", b.kappa);
  try {
    b.check();
  } catch (const ConfigError& e) {
    throw ValidationError(e.what());
  }
  return b;
}

calibration::BudgetConfig load_budget(const std::filesystem::path& path) {
  return with_origin(path, [&] { return budget_from_json(parse_json(read_file(path), path.string())); });
}

// ---- assignments and audit ------------------------------------------------

Json to_json(const calibration::Assignment& a) {
  return {{"scope_id", a.scope_id}, {"date", format_date(a.date)}, {"color", scoring::to_string(a.color)}};
}

calibration::Assignment assignment_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path, {"scope_id", "date", "color"});
  calibration::Assignment a;
  a.scope_id = r.string("scope_id");
  try {
    a.date = parse_date(r.string("date"));
  } catch (const ParseError& e) {
    throw ParseError(r.path("date") + ": " + e.what());
  }
  a.color = parse_enum<scoring::Color>(r, "color", scoring::parse_color);
  return a;
}

std::string format_assignments(const std::vector<calibration::Assignment>& assignments) {
  std::string out;
  for (const auto& a : assignments) out += to_json(a).dump() + "\n";
  return out;
}

std::vector<calibration::Assignment> load_assignments(const std::filesystem::path& path) {
  std::vector<calibration::Assignment> out;
  auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    out.push_back(assignment_from_json(parse_json(lines[i], where), where));
  }
  return out;
}

Json to_json(const calibration::AuditReport& report) {
  Json colors = Json::object();
  for (const auto& c : report.colors) {
    colors[std::string(scoring::to_string(c.color))] = {{"scope_days", c.scope_days},
                                                        {"fraction", c.fraction},
                                                        {"cap", c.cap},
                                                        {"limit", c.limit},
                                                        {"compliant", c.compliant}};
  }
  return {{"total_scope_days", report.total_scope_days},
          {"colors", std::move(colors)},
          {"compliant", report.compliant}};
}

// ---- what-if --------------------------------------------------------------

Json to_json(const whatif::Action& a) {
  Json out = {{"kind", whatif::to_string(a.kind)}};
  if (a.kind == whatif::ActionKind::add_capacity) {
    out["layer_id"] = a.target;
    out["amount"] = a.amount;
  } else {
    out["element_id"] = a.target;
  }
  return out;
}

std::vector<whatif::Action> actions_from_json(const Json& j) {
  expect_array(j, "$");
  std::vector<whatif::Action> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    ObjectReader r(j[i], index_path("$", i), {"kind", "element_id", "layer_id", "amount"});
    whatif::Action a;
    a.kind = parse_enum<whatif::ActionKind>(r, "kind", whatif::parse_action_kind);
    if (a.kind == whatif::ActionKind::add_capacity) {
      if (r.find("element_id")) throw ParseError(r.path("element_id") + ": add_capacity targets a layer_id");
      a.target = r.string("layer_id");
      a.amount = r.integer("amount");
      if (a.amount <= 0) throw ValidationError(r.path("amount") + ": must be > 0");
    } else {
      if (r.find("layer_id") || r.find("amount")) {
        throw ParseError(r.path() + ": only add_capacity takes layer_id and amount");
      }
      a.target = r.string("element_id");
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<whatif::Action> load_actions(const std::filesystem::path& path) {
  return with_origin(path, [&] { return actions_from_json(parse_json(read_file(path), path.string())); });
}

Json to_json(const whatif::WhatIfResult& r) {
  return {{"before", to_json(r.before)},
          {"after", to_json(r.after)},
          {"safe_to_remove", r.safe_to_remove ? Json(*r.safe_to_remove) : Json(nullptr)}};
}

// ---- series, posture, heatmap ---------------------------------------------

Json to_json(const scoring::ScoreSeries& s) {
  Json points = Json::array();
  for (const auto& p : s.points) {
    points.push_back({{"at", format_rfc3339(p.at)},
                      {"persisted", p.persisted},
                      {"color", scoring::to_string(p.color)}});
  }
  return {{"scope_id", s.scope_id}, {"points", std::move(points)}};
}

Json to_json(const scoring::Posture& p) {
  return {{"ceiling", p.ceiling}, {"movement", p.movement}};
}

Json to_json(const std::vector<sim::HeatmapRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json cells = Json::array();
    for (const auto& c : row.cells) {
      cells.push_back({{"dc", c.dc_id}, {"persisted", c.persisted}, {"color", scoring::to_string(c.color)}});
    }
    out.push_back({{"region", row.region_id}, {"cells", std::move(cells)}});
  }
  return out;
}

// ---- simulator configuration ----------------------------------------------

Json to_json(const sim::FleetGenSpec& s) {
  return {{"seed", s.seed},
          {"n_regions", s.n_regions},
          {"n_datacenters", s.n_datacenters},
          {"layers_per_dc", s.layers_per_dc},
          {"elements_per_layer", range_to_json(s.elements_per_layer.lo, s.elements_per_layer.hi)},
          {"element_capacity", range_to_json(s.element_capacity.lo, s.element_capacity.hi)},
          {"demand_fraction", range_to_json(s.demand_fraction.lo, s.demand_fraction.hi)},
          {"created_at", format_rfc3339(s.created_at)}};
}

sim::FleetGenSpec fleet_spec_from_json(const Json& j) {
  ObjectReader r(j, "$.fleet", {"seed", "n_regions", "n_datacenters", "layers_per_dc", "elements_per_layer",
                                "element_capacity", "demand_fraction", "created_at"});
  sim::FleetGenSpec s;
  if (const auto* v = r.find("seed")) {
    if (!v->is_number_integer()) throw ParseError(r.path("seed") + ": expected an integer");
    s.seed = v->get<std::uint64_t>();
  }
  s.n_regions = static_cast<int>(r.integer_or("n_regions", s.n_regions));
  s.n_datacenters = static_cast<int>(r.integer_or("n_datacenters", s.n_datacenters));
  s.layers_per_dc = static_cast<int>(r.integer_or("layers_per_dc", s.layers_per_dc));
  if (const auto* v = r.find("elements_per_layer")) s.elements_per_layer = int_range(*v, r.path("elements_per_layer"));
  if (const auto* v = r.find("element_capacity")) s.element_capacity = int_range(*v, r.path("element_capacity"));
  if (const auto* v = r.find("demand_fraction")) s.demand_fraction = real_range(*v, r.path("demand_fraction"));
  if (r.find("created_at")) s.created_at = r.timestamp("created_at");
  return s;
}

Json to_json(const sim::ScenarioConfig& c) {
  return {{"start", format_rfc3339(c.start)},
          {"duration_days", c.duration_days},
          {"tick_days", c.tick_days},
          {"preroll_days", c.preroll_days},
          {"base_fail_rate_per_year", range_to_json(c.base_fail_rate_per_year.lo, c.base_fail_rate_per_year.hi)},
          {"mean_repair_days", c.mean_repair_days},
          {"maintenance_rate_per_year", c.maintenance_rate_per_year},
          {"maintenance_days", c.maintenance_days},
          {"lookback_years", c.hazard.lookback_years},
          {"weights",
           {{"maintenance_multiplier", c.hazard.weights.maintenance_multiplier},
            {"maintenance_window_days", c.hazard.weights.maintenance_window_days},
            {"min_rate_per_year", c.hazard.weights.min_rate_per_year}}},
          {"budget", to_json(c.budget)},
          {"calibration", c.calibration == sim::CalibrationMode::per_tick ? "per_tick" : "annual_freeze"}};
}

sim::ScenarioConfig scenario_from_json(const Json& j) {
  ObjectReader r(j, "$.scenario",
                 {"start", "duration_days", "tick_days", "preroll_days", "base_fail_rate_per_year",
                  "mean_repair_days", "maintenance_rate_per_year", "maintenance_days", "lookback_years",
                  "weights", "budget", "calibration"});
  sim::ScenarioConfig c;
  if (r.find("start")) c.start = r.timestamp("start");
  c.duration_days = static_cast<int>(r.integer_or("duration_days", c.duration_days));
  c.tick_days = r.number_or("tick_days", c.tick_days);
  c.preroll_days = static_cast<int>(r.integer_or("preroll_days", c.preroll_days));
  if (const auto* v = r.find("base_fail_rate_per_year")) {
    c.base_fail_rate_per_year = real_range(*v, r.path("base_fail_rate_per_year"));
  }
  c.mean_repair_days = r.number_or("mean_repair_days", c.mean_repair_days);
  c.maintenance_rate_per_year = r.number_or("maintenance_rate_per_year", c.maintenance_rate_per_year);
  c.maintenance_days = r.number_or("maintenance_days", c.maintenance_days);
  c.hazard.lookback_years = r.number_or("lookback_years", c.hazard.lookback_years);
  if (const auto* v = r.find("weights")) {
    ObjectReader w(*v, r.path("weights"), {"maintenance_multiplier", "maintenance_window_days", "min_rate_per_year"});
    auto& cw = c.hazard.weights;
    cw.maintenance_multiplier = w.number_or("maintenance_multiplier", cw.maintenance_multiplier);
    cw.maintenance_window_days = static_cast<int>(w.integer_or("maintenance_window_days", cw.maintenance_window_days));
    cw.min_rate_per_year = w.number_or("min_rate_per_year", cw.min_rate_per_year);
  }
  if (const auto* v = r.find("budget")) c.budget = budget_from_json(*v);
  if (r.find("calibration")) {
    auto mode = r.string("calibration");
    if (mode == "per_tick") {
      c.calibration = sim::CalibrationMode::per_tick;
    } else if (mode == "annual_freeze") {
      c.calibration = sim::CalibrationMode::annual_freeze;
    } else {
      throw ParseError(r.path("calibration") + ": expected per_tick or annual_freeze");
    }
  }
  try {
    c.check();
  } catch (const ConfigError& e) {
    throw ValidationError(e.what());
  }
  return c;
}

ScenarioFile scenario_file_from_json(const Json& j) {
  ObjectReader r(j, "$", {"fleet", "scenario", "history_seed"});
  ScenarioFile f;
  if (const auto* v = r.find("fleet")) f.fleet = fleet_spec_from_json(*v);
  if (const auto* v = r.find("scenario")) f.scenario = scenario_from_json(*v);
  if (const auto* v = r.find("history_seed")) {
    if (!v->is_number_integer()) throw ParseError(r.path("history_seed") + ": expected an integer");
    f.history_seed = v->get<std::uint64_t>();
  }
  try {
    f.fleet.check();
  } catch (const ConfigError& e) {
    throw ValidationError(e.what());
  }
  return f;
}

Json to_json(const ScenarioFile& f) {
  return {{"fleet", to_json(f.fleet)}, {"scenario", to_json(f.scenario)}, {"history_seed", f.history_seed}};
}

}  // namespace ansc::io
