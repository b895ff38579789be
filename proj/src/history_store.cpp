#include "ansc/history_store.hpp"

#include <cctype>
#include <fstream>
#include <mutex>

#include "ansc/io.hpp"

namespace ansc {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::optional<std::string> unescape(std::string_view name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (name[i] != '%') {
      out += name[i];
      continue;
    }
    if (i + 2 >= name.size()) return std::nullopt;
    int hi = hex_value(name[i + 1]);
    int lo = hex_value(name[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out += static_cast<char>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

constexpr std::string_view kExtension = ".ndjson";

}  // namespace

std::string HistoryStore::file_name(std::string_view scope_id) {
  static constexpr char digits[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : scope_id) {
    if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += digits[c >> 4];
      out += digits[c & 0xF];
    }
  }
  return out + std::string(kExtension);
}

HistoryStore::HistoryStore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(*root_);
  for (const auto& entry : std::filesystem::directory_iterator(*root_)) {
    if (!entry.is_regular_file()) continue;
    auto name = entry.path().filename().string();
    if (!name.ends_with(kExtension)) continue;
    auto scope = unescape(std::string_view(name).substr(0, name.size() - kExtension.size()));
    if (!scope) continue;
    std::vector<scoring::ScoreCard> cards;
    std::size_t line_no = 0;
    std::ifstream in(entry.path());
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      if (line.empty()) continue;
      const auto where = entry.path().string() + ":" + std::to_string(line_no);
      auto card = io::scorecard_from_json(io::parse_json(line, where), where);
      if (card.scope_id != *scope) throw ParseError(where + ": scope id does not match file");
      if (!cards.empty() && card.at <= cards.back().at) throw ParseError(where + ": records out of order");
      cards.push_back(std::move(card));
    }
    series_.emplace(std::move(*scope), std::move(cards));
  }
}

void HistoryStore::append(std::span<const scoring::ScoreCard> cards) {
  std::unique_lock lock(mutex_);
  std::map<std::string_view, Timestamp> tails;
  for (const auto& card : cards) {
    auto [it, fresh] = tails.try_emplace(card.scope_id, Timestamp::min());
    if (fresh) {
      auto s = series_.find(card.scope_id);
      if (s != series_.end() && !s->second.empty()) it->second = s->second.back().at;
    }
    if (card.at <= it->second) {
      throw PreconditionError("out-of-order append for '" + card.scope_id + "' at " +
                              format_rfc3339(card.at) + " (tail " + format_rfc3339(it->second) + ")");
    }
    it->second = card.at;
  }

  if (root_) {
    std::map<std::string_view, std::string> lines;
    for (const auto& card : cards) lines[card.scope_id] += io::to_json(card).dump() + "\n";
    for (const auto& [scope, text] : lines) {
      std::ofstream out(*root_ / file_name(scope), std::ios::app | std::ios::binary);
      out << text;
      if (!out) throw Error("cannot append history for '" + std::string(scope) + "'");
    }
  }
  for (const auto& card : cards) series_[card.scope_id].push_back(card);
}

std::vector<scoring::ScoreCard> HistoryStore::read_cards(std::string_view scope_id, std::size_t window) const {
  std::shared_lock lock(mutex_);
  auto it = series_.find(scope_id);
  if (it == series_.end()) return {};
  const auto& all = it->second;
  std::size_t first = (window == 0 || window >= all.size()) ? 0 : all.size() - window;
  return {all.begin() + static_cast<std::ptrdiff_t>(first), all.end()};
}

scoring::ScoreSeries HistoryStore::read_series(std::string_view scope_id, std::size_t window) const {
  scoring::ScoreSeries series;
  series.scope_id = std::string(scope_id);
  for (const auto& card : read_cards(scope_id, window)) {
    series.points.push_back({card.at, card.persisted, card.color});
  }
  return series;
}

std::size_t HistoryStore::size(std::string_view scope_id) const {
  std::shared_lock lock(mutex_);
  auto it = series_.find(scope_id);
  return it == series_.end() ? 0 : it->second.size();
}

std::vector<std::string> HistoryStore::scopes() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [scope, _] : series_) out.push_back(scope);
  return out;
}

}  // namespace ansc
