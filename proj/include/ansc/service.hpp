#pragma once

// HTTP API over a scored fleet. Requests are served from an immutable
// ServiceState snapshot; a demo-mode tick builds the next snapshot and swaps
// it in, so a request never mixes two ticks.
//
//   GET  /v1/fleet/scores
//   GET  /v1/regions/{region}/heatmap
//   GET  /v1/datacenters/{dc}/scorecard
//   GET  /v1/datacenters/{dc}/history?window=N
//   GET  /v1/calibration/thresholds[?population=datacenter|region]
//   POST /v1/whatif
//   POST /v1/sim/tick                      (demo mode)

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "ansc/calibration.hpp"
#include "ansc/fabric.hpp"
#include "ansc/hazard.hpp"
#include "ansc/history_store.hpp"
#include "ansc/pipeline.hpp"
#include "ansc/scoring.hpp"
#include "ansc/simulator.hpp"

namespace httplib {
class Server;
}

namespace ansc::service {

struct ServiceState {
  fabric::FabricTopology fleet;
  hazard::HazardTable hazards;
  pipeline::FleetScores scores;
  scoring::PersistenceBook persistence;
  calibration::BudgetConfig budget;
  std::map<std::string, std::string> region_of;
  std::size_t tick = 0;
};

struct Request {
  std::string method;
  std::string path;
  std::multimap<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;
};

enum class Mode { file, demo };

/// Default number of points for the history route.
inline constexpr std::size_t kDefaultHistoryWindow = 30;

class Service {
 public:
  /// File mode: a fixed snapshot. Its cards are appended to `history` unless
  /// the store already holds that tick.
  Service(ServiceState state, std::shared_ptr<HistoryStore> history);
  /// Demo mode: the simulation is stepped once so there is a first snapshot.
  Service(std::unique_ptr<sim::Simulation> simulation, std::shared_ptr<HistoryStore> history);
  ~Service();

  Mode mode() const { return mode_; }

  /// Route a request. Never throws; failures become 4xx/5xx JSON bodies of
  /// the form {"error": {"kind", "message"}}.
  Response handle(const Request& request) const;

  /// Advance the simulation one tick and publish the new snapshot. Throws
  /// ConflictError in file mode, while another tick runs, or at the end.
  Timestamp tick() const;

  std::shared_ptr<const ServiceState> snapshot() const;
  const HistoryStore& history() const { return *history_; }

 private:
  Response route(const Request& request) const;
  void publish(std::shared_ptr<const ServiceState> next) const;

  Mode mode_;
  std::shared_ptr<HistoryStore> history_;
  std::unique_ptr<sim::Simulation> simulation_;
  calibration::BudgetConfig budget_;
  mutable std::mutex tick_mutex_;
  mutable std::mutex snapshot_mutex_;
  mutable std::shared_ptr<const ServiceState> current_;
};

/// Build a file-mode snapshot: estimate hazards at `at` from the incident
/// history and score the fleet with calibrated thresholds.
ServiceState snapshot_from_files(fabric::FabricTopology fleet,
                                 std::span<const hazard::IncidentRecord> incidents,
                                 const calibration::BudgetConfig& budget, Timestamp at,
                                 const hazard::HazardParams& params);

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 8080;
};
/// "host:port", ":port" or "port". Throws ConfigError.
ListenAddress parse_listen(std::string_view text);

class HttpServer {
 public:
  HttpServer(const Service& service, std::string cors_origin = {});
  ~HttpServer();

  /// Bind without serving; port 0 picks a free port. Returns the bound port.
  int bind(const ListenAddress& address);
  /// Serve until stop(). Requires bind().
  void run();
  void stop();

 private:
  const Service& service_;
  std::string cors_origin_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace ansc::service
