#include "ansc/service.hpp"

#include <charconv>

#include "httplib.h"

#include "ansc/io.hpp"
#include "ansc/whatif.hpp"

namespace ansc::service {

namespace {

using io::Json;

Response json_response(int status, const Json& body) { return {status, body.dump()}; }

Response error_response(int status, std::string_view kind, std::string_view message) {
  return json_response(status, Json{{"error", {{"kind", kind}, {"message", message}}}});
}

int status_for(const Error& e) {
  const auto kind = e.kind();
  if (kind == "not_found") return 404;
  if (kind == "conflict") return 409;
  if (kind == "parse" || kind == "validation" || kind == "domain" || kind == "config" ||
      kind == "precondition") {
    return 400;
  }
  return 500;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) out.push_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return out;
}

std::optional<std::string> query_value(const Request& request, const std::string& key) {
  auto it = request.query.find(key);
  if (it == request.query.end()) return std::nullopt;
  return it->second;
}

const fabric::Datacenter& require_datacenter(const ServiceState& state, std::string_view dc_id) {
  auto index = fabric::find_datacenter(state.fleet, dc_id);
  if (!index) throw NotFoundError("unknown datacenter '" + std::string(dc_id) + "'");
  return state.fleet.datacenters[*index];
}

Response fleet_scores(const ServiceState& state) {
  return json_response(200, io::to_json(state.scores.all_cards()));
}

Response region_heatmap(const ServiceState& state, std::string_view region) {
  if (std::find(state.fleet.regions.begin(), state.fleet.regions.end(), region) == state.fleet.regions.end()) {
    throw NotFoundError("unknown region '" + std::string(region) + "'");
  }
  std::vector<scoring::ScoreCard> members;
  for (const auto& card : state.scores.datacenters) {
    auto it = state.region_of.find(card.scope_id);
    if (it != state.region_of.end() && it->second == region) members.push_back(card);
  }
  auto rows = sim::export_heatmap(members, state.region_of);
  sim::HeatmapRow row{std::string(region), {}};
  if (!rows.empty()) row = std::move(rows.front());
  return json_response(200, io::to_json(std::vector<sim::HeatmapRow>{row}).at(0));
}

Response datacenter_scorecard(const ServiceState& state, std::string_view dc_id) {
  const auto& dc = require_datacenter(state, dc_id);
  const auto* card = state.scores.find(scoring::Scope::datacenter, dc.id);
  if (!card) throw NotFoundError("no score for datacenter '" + dc.id + "'");
  Json layers = Json::array();
  for (const auto& layer : dc.layers) {
    if (const auto* lc = state.scores.find(scoring::Scope::layer, fabric::layer_scope_id(dc.id, layer.id))) {
      layers.push_back(io::to_json(*lc));
    }
  }
  return json_response(200, Json{{"card", io::to_json(*card)}, {"layers", std::move(layers)}});
}

std::size_t parse_window(const Request& request) {
  auto text = query_value(request, "window");
  if (!text) return kDefaultHistoryWindow;
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || end != text->data() + text->size() || value == 0) {
    throw ParseError("query.window: expected a positive integer, got '" + *text + "'");
  }
  return value;
}

Response datacenter_history(const ServiceState& state, const HistoryStore& history, std::string_view dc_id,
                            const Request& request) {
  const auto& dc = require_datacenter(state, dc_id);
  const auto window = parse_window(request);
  // Drop points newer than this snapshot so the reply matches one tick.
  auto full = history.read_series(dc.id);
  scoring::ScoreSeries series{dc.id, {}};
  for (const auto& p : full.points) {
    if (p.at <= state.scores.at) series.points.push_back(p);
  }
  if (series.points.size() > window) {
    series.points.erase(series.points.begin(),
                        series.points.end() - static_cast<std::ptrdiff_t>(window));
  }
  Json posture = nullptr;
  if (window >= 2 && series.points.size() >= window) {
    posture = io::to_json(scoring::posture_and_movement(series, window));
  }
  return json_response(200, Json{{"series", io::to_json(series)}, {"posture", std::move(posture)}});
}

Response thresholds(const ServiceState& state, const Request& request) {
  auto population = query_value(request, "population").value_or("datacenter");
  auto parsed = calibration::parse_population(population);
  if (!parsed) throw ParseError("query.population: expected datacenter or region");
  const auto& t = *parsed == calibration::Population::region ? state.scores.thresholds.region
                                                             : state.scores.thresholds.datacenter;
  return json_response(200, io::to_json(t));
}

Response whatif(const ServiceState& state, const Request& request) {
  auto actions = io::actions_from_json(io::parse_json(request.body, "body"));
  auto result = whatif::evaluate(state.fleet, state.hazards, state.scores.thresholds, state.budget, actions,
                                 state.scores.at, &state.persistence);
  return json_response(200, io::to_json(result));
}

}  // namespace

Service::Service(ServiceState state, std::shared_ptr<HistoryStore> history)
    : mode_(Mode::file), history_(std::move(history)), budget_(state.budget) {
  if (!history_) history_ = std::make_shared<HistoryStore>();
  auto next = std::make_shared<const ServiceState>(std::move(state));
  const auto cards = next->scores.all_cards();
  bool recorded = !cards.empty();
  for (const auto& card : cards) {
    auto tail = history_->read_cards(card.scope_id, 1);
    recorded = recorded && !tail.empty() && tail.back().at >= card.at;
  }
  if (!recorded) history_->append(cards);
  current_ = std::move(next);
}

Service::Service(std::unique_ptr<sim::Simulation> simulation, std::shared_ptr<HistoryStore> history)
    : mode_(Mode::demo), history_(std::move(history)), simulation_(std::move(simulation)) {
  if (!simulation_) throw ConfigError("demo mode needs a simulation");
  budget_ = simulation_->config().budget;
  if (!history_) history_ = std::make_shared<HistoryStore>();
  tick();
}

Service::~Service() = default;

std::shared_ptr<const ServiceState> Service::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return current_;
}

void Service::publish(std::shared_ptr<const ServiceState> next) const {
  std::lock_guard lock(snapshot_mutex_);
  current_ = std::move(next);
}

Timestamp Service::tick() const {
  if (mode_ != Mode::demo) throw ConflictError("ticks are only available in demo mode");
  std::unique_lock lock(tick_mutex_, std::try_to_lock);
  if (!lock.owns_lock()) throw ConflictError("a tick is already in progress");

  // What-ifs see the persistence the served cards were scored with.
  auto book = simulation_->persistence();
  const auto& scores = simulation_->step();
  auto next = std::make_shared<ServiceState>();
  next->fleet = simulation_->fleet();
  next->hazards = simulation_->hazards();
  next->scores = scores;
  next->persistence = std::move(book);
  next->budget = budget_;
  next->region_of = pipeline::region_of(next->fleet);
  next->tick = simulation_->ticks_done();
  history_->append(next->scores.all_cards());
  const auto at = next->scores.at;
  publish(std::move(next));
  return at;
}

Response Service::handle(const Request& request) const {
  try {
    return route(request);
  } catch (const Error& e) {
    return error_response(status_for(e), e.kind(), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

Response Service::route(const Request& request) const {
  const auto parts = split_path(request.path);
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  auto method_not_allowed = [&] {
    return error_response(405, "method", request.method + " not allowed on " + request.path);
  };
  if (parts.size() < 2 || parts[0] != "v1") throw NotFoundError("no route for " + request.path);

  if (parts.size() == 2 && parts[1] == "whatif") {
    if (!post) return method_not_allowed();
    return whatif(*snapshot(), request);
  }
  if (parts.size() == 3 && parts[1] == "sim" && parts[2] == "tick") {
    if (!post) return method_not_allowed();
    auto at = tick();
    auto state = snapshot();
    return json_response(200, Json{{"tick", state->tick}, {"at", format_rfc3339(at)}});
  }

  const bool known = (parts.size() == 3 && parts[1] == "fleet" && parts[2] == "scores") ||
                     (parts.size() == 4 && parts[1] == "regions" && parts[3] == "heatmap") ||
                     (parts.size() == 4 && parts[1] == "datacenters" &&
                      (parts[3] == "scorecard" || parts[3] == "history")) ||
                     (parts.size() == 3 && parts[1] == "calibration" && parts[2] == "thresholds");
  if (!known) throw NotFoundError("no route for " + request.path);
  if (!get) return method_not_allowed();

  const auto state = snapshot();
  if (parts[1] == "fleet") return fleet_scores(*state);
  if (parts[1] == "regions") return region_heatmap(*state, parts[2]);
  if (parts[1] == "calibration") return thresholds(*state, request);
  if (parts[3] == "scorecard") return datacenter_scorecard(*state, parts[2]);
  return datacenter_history(*state, *history_, parts[2], request);
}

ServiceState snapshot_from_files(fabric::FabricTopology fleet,
                                 std::span<const hazard::IncidentRecord> incidents,
                                 const calibration::BudgetConfig& budget, Timestamp at,
                                 const hazard::HazardParams& params) {
  budget.check();
  ServiceState state;
  state.fleet = std::move(fleet);
  state.budget = budget;
  auto hazard_params = params;
  hazard_params.horizon_years = budget.horizon_years;
  state.hazards = hazard::estimate_hazards(state.fleet, incidents, at, hazard_params);
  state.scores = pipeline::score_fleet(state.fleet, state.hazards, budget, &state.persistence, at);
  state.region_of = pipeline::region_of(state.fleet);
  return state;
}

ListenAddress parse_listen(std::string_view text) {
  ListenAddress out;
  std::string_view port_text = text;
  if (auto colon = text.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) out.host = std::string(text.substr(0, colon));
    port_text = text.substr(colon + 1);
  }
  int port = 0;
  auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || end != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw ConfigError("invalid listen address '" + std::string(text) + "'");
  }
  out.port = port;
  return out;
}

HttpServer::HttpServer(const Service& service, std::string cors_origin)
    : service_(service), cors_origin_(std::move(cors_origin)), server_(std::make_unique<httplib::Server>()) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    Request request{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) request.query.emplace(k, v);
    auto response = service_.handle(request);
    res.status = response.status;
    res.set_content(response.body, "application/json");
  };
  server_->Get(".*", forward);
  server_->Post(".*", forward);
  server_->Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  if (!cors_origin_.empty()) {
    server_->set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", cors_origin_);
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
  }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const ListenAddress& address) {
  int port = address.port;
  if (port == 0) {
    port = server_->bind_to_any_port(address.host);
    if (port < 0) port = 0;
  } else if (!server_->bind_to_port(address.host, port)) {
    port = 0;
  }
  if (port == 0) {
    throw ConfigError("cannot listen on " + address.host + ":" + std::to_string(address.port));
  }
  return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace ansc::service
