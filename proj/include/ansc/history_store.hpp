#pragma once

// Append-only per-scope score history. With a root directory each scope is
// mirrored to <root>/<escaped scope id>.ndjson, one scorecard per line, and
// existing files are loaded on open.

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "ansc/scoring.hpp"

namespace ansc {

class HistoryStore {
 public:
  /// In-memory only.
  HistoryStore() = default;
  explicit HistoryStore(std::filesystem::path root);

  /// Append a batch. Every card must be strictly later than its scope's
  /// tail (and than earlier cards of the same scope in the batch); otherwise
  /// PreconditionError and nothing is written.
  void append(std::span<const scoring::ScoreCard> cards);

  /// Trailing `window` cards of a scope in time order; 0 means all. Unknown
  /// scopes give an empty vector.
  std::vector<scoring::ScoreCard> read_cards(std::string_view scope_id, std::size_t window = 0) const;
  scoring::ScoreSeries read_series(std::string_view scope_id, std::size_t window = 0) const;

  std::size_t size(std::string_view scope_id) const;
  std::vector<std::string> scopes() const;
  const std::optional<std::filesystem::path>& root() const { return root_; }

  /// File name used for a scope id: bytes outside [A-Za-z0-9._-] become %XX.
  static std::string file_name(std::string_view scope_id);

 private:
  std::optional<std::filesystem::path> root_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::vector<scoring::ScoreCard>, std::less<>> series_;
};

}  // namespace ansc
