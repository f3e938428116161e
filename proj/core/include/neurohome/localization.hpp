#pragma once

#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neurohome/home.hpp"

// Room-level localisation from beacon RSSI reports.
//
// Wire protocol: UTF-8 lines terminated by '\n', fields separated by single
// spaces:
//   RSSI <beacon_id> <room_id> <rssi_dbm> <timestamp_ms>
// ids match [A-Za-z0-9_]+, rssi_dbm is a plain decimal in [-120, 0] and
// timestamp_ms a non-negative integer.
namespace neurohome::loc {

inline constexpr std::int64_t kDefaultStalenessMs = 2000;
inline constexpr double kMinRssiDbm = -120.0;
inline constexpr double kMaxRssiDbm = 0.0;

struct BeaconReading {
  std::string beacon_id;
  std::string room_id;
  double rssi_dbm = 0.0;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const BeaconReading&, const BeaconReading&) = default;
};

// Throws ParseError (with byte offset) on malformed lines and RangeError on
// RSSI outside [-120, 0]. A single trailing '\n' is accepted.
BeaconReading parse_reading(std::string_view line);

// Protocol line without the terminating newline.
std::string format_reading(const BeaconReading& r);

// Reads a whole stream. Lines whose first token is not "RSSI" are skipped and
// reported through `warnings`; empty lines are ignored.
std::vector<BeaconReading> parse_stream(std::istream& in, std::vector<std::string>* warnings = nullptr);

struct RoomFix {
  std::optional<std::string> room_id;
  std::string beacon_id;
  double winning_rssi = 0.0;
  std::size_t readings_considered = 0;
  std::int64_t resolved_at_ms = 0;
};

// Keeps readings with 0 <= now - timestamp <= staleness, takes each beacon's
// latest, and picks the room of the strongest. Equal RSSI goes to the
// lexicographically smallest beacon id.
RoomFix resolve(std::span<const BeaconReading> readings, std::int64_t now_ms,
                std::int64_t staleness_ms = kDefaultStalenessMs);

// Device at (room, class); throws LookupError when either is unknown.
std::string device_for(const std::string& room_id, int class_id, const control::HomeModel& home);

// Log-distance path loss: rssi = p0 - 10 * exponent * log10(d) + N(0, noise).
struct PathLossModel {
  double p0_dbm = -40.0;
  double exponent = 2.5;
  double noise_sigma_db = 2.0;  // 0 gives the noise-free model
};

double simulate_rssi(double distance_m, std::uint64_t seed, const PathLossModel& model = {});

// Single-writer / single-reader handoff between the ingestion task and the
// resolver. snapshot() returns a consistent copy.
class ReadingStore {
 public:
  void push(BeaconReading r);
  std::vector<BeaconReading> snapshot() const;
  // Readings with timestamp <= until_ms, in arrival order.
  std::vector<BeaconReading> snapshot_until(std::int64_t until_ms) const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<BeaconReading> readings_;
};

}  // namespace neurohome::loc
