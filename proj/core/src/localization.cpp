#include "neurohome/localization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>

#include "neurohome/error.hpp"
#include "neurohome/random.hpp"
#include "neurohome/text.hpp"

namespace neurohome::loc {
namespace {

bool is_id(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

struct Token {
  std::string_view text;
  std::size_t offset;
};

std::vector<Token> split_spaces(std::string_view line) {
  std::vector<Token> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ' ') {
      out.push_back({line.substr(start, i - start), start});
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

BeaconReading parse_reading(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  const auto tokens = split_spaces(line);
  for (const auto& t : tokens) {
    if (t.text.empty()) throw ParseError("empty field (fields are separated by single spaces)", t.offset);
  }
  if (tokens.front().text != "RSSI") throw ParseError("expected record type 'RSSI'", 0);
  if (tokens.size() != 5) {
    throw ParseError("expected 5 fields, got " + std::to_string(tokens.size()),
                     tokens.size() > 5 ? tokens[5].offset : line.size());
  }

  BeaconReading r;
  if (!is_id(tokens[1].text)) throw ParseError("beacon_id must match [A-Za-z0-9_]+", tokens[1].offset);
  if (!is_id(tokens[2].text)) throw ParseError("room_id must match [A-Za-z0-9_]+", tokens[2].offset);
  r.beacon_id = tokens[1].text;
  r.room_id = tokens[2].text;

  const auto rssi = text::parse_decimal(tokens[3].text);
  if (!rssi) throw ParseError("rssi_dbm is not a decimal number", tokens[3].offset);
  if (*rssi > kMaxRssiDbm || *rssi < kMinRssiDbm) {
    throw RangeError("rssi_dbm " + std::string(tokens[3].text) + " outside [-120, 0]");
  }
  r.rssi_dbm = *rssi;

  const auto ts = tokens[4].text;
  const bool digits = std::all_of(ts.begin(), ts.end(), [](char c) { return c >= '0' && c <= '9'; });
  auto [ptr, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), r.timestamp_ms);
  if (!digits || ec != std::errc{} || ptr != ts.data() + ts.size()) {
    throw ParseError("timestamp_ms must be a non-negative integer", tokens[4].offset);
  }
  return r;
}

std::string format_reading(const BeaconReading& r) {
  return "RSSI " + r.beacon_id + " " + r.room_id + " " + text::format_decimal(r.rssi_dbm) + " " +
         std::to_string(r.timestamp_ms);
}

std::vector<BeaconReading> parse_stream(std::istream& in, std::vector<std::string>* warnings) {
  std::vector<BeaconReading> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    const std::string_view first = std::string_view(line).substr(0, line.find(' '));
    if (first != "RSSI") {
      if (warnings) warnings->push_back("line " + std::to_string(line_no) + ": skipping unknown record '" +
                                        std::string(first) + "'");
      continue;
    }
    try {
      out.push_back(parse_reading(line));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.detail(), line_offset + e.offset());
    }
  }
  return out;
}

RoomFix resolve(std::span<const BeaconReading> readings, std::int64_t now_ms, std::int64_t staleness_ms) {
  // Latest fresh reading per beacon; equal timestamps fall back to the
  // stronger reading, then the smaller room id, so input order never matters.
  std::map<std::string, const BeaconReading*> latest;
  for (const auto& r : readings) {
    const std::int64_t age = now_ms - r.timestamp_ms;
    if (age < 0 || age > staleness_ms) continue;
    auto [it, inserted] = latest.emplace(r.beacon_id, &r);
    if (inserted) continue;
    const BeaconReading& cur = *it->second;
    if (std::tie(r.timestamp_ms, r.rssi_dbm, cur.room_id) > std::tie(cur.timestamp_ms, cur.rssi_dbm, r.room_id)) {
      it->second = &r;
    }
  }

  RoomFix fix;
  fix.resolved_at_ms = now_ms;
  fix.readings_considered = latest.size();
  const BeaconReading* best = nullptr;
  for (const auto& [beacon, r] : latest) {  // ascending beacon id
    if (!best || r->rssi_dbm > best->rssi_dbm) best = r;
  }
  if (best) {
    fix.room_id = best->room_id;
    fix.beacon_id = best->beacon_id;
    fix.winning_rssi = best->rssi_dbm;
  }
  return fix;
}

std::string device_for(const std::string& room_id, int class_id, const control::HomeModel& home) {
  return home.device(room_id, class_id).device_id;
}

double simulate_rssi(double distance_m, std::uint64_t seed, const PathLossModel& model) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw InvalidInput("simulate_rssi: distance must be positive, got " + std::to_string(distance_m));
  }
  double rssi = model.p0_dbm - 10.0 * model.exponent * std::log10(distance_m);
  if (model.noise_sigma_db > 0.0) {
    auto rng = make_rng(seed, {0x7255});
    rssi += std::normal_distribution<double>(0.0, model.noise_sigma_db)(rng);
  }
  return rssi;
}

void ReadingStore::push(BeaconReading r) {
  std::lock_guard lock(mu_);
  readings_.push_back(std::move(r));
}

std::vector<BeaconReading> ReadingStore::snapshot() const {
  std::lock_guard lock(mu_);
  return readings_;
}

std::vector<BeaconReading> ReadingStore::snapshot_until(std::int64_t until_ms) const {
  std::lock_guard lock(mu_);
  std::vector<BeaconReading> out;
  for (const auto& r : readings_) {
    if (r.timestamp_ms <= until_ms) out.push_back(r);
  }
  return out;
}

std::size_t ReadingStore::size() const {
  std::lock_guard lock(mu_);
  return readings_.size();
}

}  // namespace neurohome::loc
