#include <atomic>
#include <filesystem>
#include <random>
#include <thread>

#include "doctest.h"

#include "ansc/history_store.hpp"

using namespace ansc;
using scoring::ScoreCard;

namespace {

ScoreCard card(std::string scope, int day, double persisted = 0.1) {
  ScoreCard c;
  c.scope = scoring::Scope::datacenter;
  c.scope_id = std::move(scope);
  c.persisted = persisted;
  c.raw = persisted;
  c.at = make_timestamp(2026, 1, 1) + std::chrono::days(day);
  return c;
}

struct TempDir {
  std::filesystem::path path =
      std::filesystem::temp_directory_path() / ("ansc-history-" + std::to_string(std::random_device{}()));
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_SUITE("history_store") {

TEST_CASE("append and read a trailing window") {
  HistoryStore store;
  std::vector<ScoreCard> cards{card("dc1", 0, 0.1), card("dc1", 1, 0.2), card("dc1", 2, 0.3)};
  store.append(cards);
  auto last_two = store.read_cards("dc1", 2);
  REQUIRE(last_two.size() == 2);
  CHECK(last_two[0] == cards[1]);
  CHECK(last_two[1] == cards[2]);
  CHECK(store.read_cards("dc1").size() == 3);
  CHECK(store.read_cards("dc1", 10).size() == 3);
  auto series = store.read_series("dc1", 2);
  CHECK(series.scope_id == "dc1");
  CHECK(series.points[1].persisted == 0.3);
  CHECK(store.size("dc1") == 3);
  CHECK(store.scopes() == std::vector<std::string>{"dc1"});
}

TEST_CASE("unknown scope is empty") {
  HistoryStore store;
  CHECK(store.read_cards("nope").empty());
  CHECK(store.read_series("nope").points.empty());
  CHECK(store.size("nope") == 0);
}

TEST_CASE("out-of-order appends are rejected whole") {
  HistoryStore store;
  std::vector<ScoreCard> first{card("dc1", 5), card("dc2", 5)};
  store.append(first);
  std::vector<ScoreCard> batch{card("dc2", 6), card("dc1", 5)};
  CHECK_THROWS_AS(store.append(batch), PreconditionError);
  CHECK(store.size("dc2") == 1);
  std::vector<ScoreCard> dup{card("dc3", 1), card("dc3", 1)};
  CHECK_THROWS_AS(store.append(dup), PreconditionError);
  CHECK(store.size("dc3") == 0);
}

TEST_CASE("disk mirror reloads") {
  TempDir dir;
  {
    HistoryStore store(dir.path);
    std::vector<ScoreCard> cards{card("dc1/agg", 0), card("r 1", 0), card("dc1/agg", 1, 0.5)};
    store.append(cards);
  }
  CHECK(std::filesystem::exists(dir.path / HistoryStore::file_name("dc1/agg")));
  HistoryStore reopened(dir.path);
  CHECK(reopened.size("dc1/agg") == 2);
  CHECK(reopened.read_cards("dc1/agg").back().persisted == 0.5);
  CHECK(reopened.size("r 1") == 1);
  std::vector<ScoreCard> stale{card("dc1/agg", 1)};
  CHECK_THROWS_AS(reopened.append(stale), PreconditionError);
}

TEST_CASE("file names escape separators") {
  CHECK(HistoryStore::file_name("dc-001") == "dc-001.ndjson");
  CHECK(HistoryStore::file_name("dc1/agg") == "dc1%2Fagg.ndjson");
}

TEST_CASE("interleaved appends keep each scope in order") {
  HistoryStore store;
  std::mt19937_64 rng(3);
  std::map<std::string, int> next;
  for (int round = 0; round < 200; ++round) {
    std::vector<ScoreCard> batch;
    for (const char* scope : {"a", "b", "c"}) {
      if (rng() % 2) batch.push_back(card(scope, next[scope]++));
    }
    store.append(batch);
  }
  for (const char* scope : {"a", "b", "c"}) {
    auto cards = store.read_cards(scope);
    CHECK(cards.size() == static_cast<std::size_t>(next[scope]));
    for (std::size_t i = 1; i < cards.size(); ++i) CHECK(cards[i - 1].at < cards[i].at);
  }
}

TEST_CASE("concurrent readers see whole batches") {
  HistoryStore store;
  std::atomic<bool> stop{false};
  std::atomic<int> torn{0};
  std::vector<std::thread> readers;
  for (int r = 0; r < 4; ++r) {
    readers.emplace_back([&] {
      while (!stop) {
        const auto a = store.size("a");
        const auto b = store.size("b");
        if (b > a) ++torn;  // "a" is always written first within a batch
      }
    });
  }
  for (int day = 0; day < 500; ++day) {
    std::vector<ScoreCard> batch{card("a", day), card("b", day)};
    store.append(batch);
  }
  stop = true;
  for (auto& t : readers) t.join();
  CHECK(torn == 0);
  CHECK(store.size("b") == 500);
}

}
