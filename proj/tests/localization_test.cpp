#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "neurohome/error.hpp"
#include "neurohome/home.hpp"
#include "neurohome/localization.hpp"

using namespace neurohome;
using namespace neurohome::loc;

TEST_CASE("parse a protocol line") {
  const auto r = parse_reading("RSSI b1 room_a -52.5 1700000000000");
  CHECK(r == BeaconReading{"b1", "room_a", -52.5, 1700000000000});
  CHECK(parse_reading("RSSI b1 room_a -52.5 17\n").timestamp_ms == 17);
  CHECK(parse_reading("RSSI B_9 R2 0 0").rssi_dbm == 0.0);
  CHECK(parse_reading("RSSI b R -120 0").rssi_dbm == -120.0);
}

TEST_CASE("malformed lines report the offending byte") {
  auto offset_of = [](const std::string& line) -> std::size_t {
    try {
      parse_reading(line);
    } catch (const ParseError& e) {
      return e.offset();
    }
    FAIL("no parse error for: " << line);
    return 0;
  };
  CHECK(offset_of("RSSI b1 room_a notanumber 0") == 15);
  CHECK(offset_of("RSSX b1 room_a -50 0") == 0);
  CHECK(offset_of("RSSI b1 room_a -50") == 18);
  CHECK(offset_of("RSSI b1 room-a -50 0") == 8);
  CHECK(offset_of("RSSI b1  room_a -50 0") == 8);
  CHECK(offset_of("RSSI b1 room_a -50 -3") == 19);
  CHECK(offset_of("RSSI b1 room_a -50 12x") == 19);
  CHECK(offset_of("RSSI b1 room_a -5e1 0") == 15);
  CHECK_THROWS_AS(parse_reading("RSSI b1 room_a -50 0 extra"), ParseError);
  CHECK_THROWS_AS(parse_reading("RSSI b1 room_a -50 0\r\n"), ParseError);
  CHECK_THROWS_AS(parse_reading(""), ParseError);
}

TEST_CASE("rssi outside [-120, 0] is a range error") {
  CHECK_THROWS_AS(parse_reading("RSSI b2 room_b -300 0"), RangeError);
  CHECK_THROWS_AS(parse_reading("RSSI b2 room_b 0.5 0"), RangeError);
  CHECK_THROWS_AS(parse_reading("RSSI b2 room_b -120.01 0"), RangeError);
}

TEST_CASE("format is the exact wire layout") {
  CHECK(format_reading({"b1", "room_a", -52.5, 1700000000000}) == "RSSI b1 room_a -52.5 1700000000000");
  CHECK(format_reading({"b1", "room_a", -60.0, 0}) == "RSSI b1 room_a -60 0");
}

TEST_CASE("property: fuzzed readings round-trip") {
  std::mt19937_64 rng(5);
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1), len(1, 12);
  std::uniform_real_distribution<double> rssi(-120.0, 0.0);
  std::uniform_int_distribution<std::int64_t> ts(0, 4'000'000'000'000);
  auto id = [&] {
    std::string s(len(rng), 'x');
    for (auto& c : s) c = alphabet[ch(rng)];
    return s;
  };
  for (int i = 0; i < 1000; ++i) {
    const BeaconReading r{id(), id(), rssi(rng), ts(rng)};
    CHECK(parse_reading(format_reading(r)) == r);
  }
}

TEST_CASE("stream parsing skips unknown records") {
  std::istringstream in("RSSI b1 room_a -50 10\n\nHELLO world\nRSSI b2 room_b -70 20\n");
  std::vector<std::string> warnings;
  const auto rs = parse_stream(in, &warnings);
  CHECK(rs.size() == 2);
  CHECK(warnings.size() == 1);
  std::istringstream bad("RSSI b1 room_a -50 10\nRSSI b1 room_a x 10\n");
  try {
    parse_stream(bad);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 22 + 15);
  }
}

TEST_CASE("resolve picks the strongest fresh beacon") {
  const std::vector<BeaconReading> rs{{"b1", "room_a", -50, 1000}, {"b2", "room_b", -70, 1000}};
  auto fix = resolve(rs, 1500);
  REQUIRE(fix.room_id);
  CHECK(*fix.room_id == "room_a");
  CHECK(fix.beacon_id == "b1");
  CHECK(fix.winning_rssi == -50);
  CHECK(fix.readings_considered == 2);
  CHECK(fix.resolved_at_ms == 1500);

  const std::vector<BeaconReading> tie{{"b2", "room_b", -60, 1000}, {"b1", "room_a", -60, 1000}};
  CHECK(*resolve(tie, 1000).room_id == "room_a");

  const auto stale = resolve(rs, 3001);
  CHECK_FALSE(stale.room_id);
  CHECK(stale.readings_considered == 0);
  CHECK(resolve(rs, 3000).room_id);
  CHECK_FALSE(resolve({}, 0).room_id);
  CHECK_FALSE(resolve(rs, 999).room_id);  // not yet received
}

TEST_CASE("resolve uses each beacon's latest reading") {
  const std::vector<BeaconReading> rs{{"b1", "room_a", -40, 1000}, {"b1", "room_a", -90, 1400}, {"b2", "room_b", -60, 1200}};
  CHECK(*resolve(rs, 1500).room_id == "room_b");
}

TEST_CASE("property: resolve is permutation invariant and ignores weaker additions") {
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<int> beacon(0, 4), ts(0, 3000);
  std::uniform_int_distribution<int> rssi(-100, -30);  // integers make ties common
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<BeaconReading> rs;
    for (int i = 0; i < 12; ++i) {
      const int b = beacon(rng);
      rs.push_back({"b" + std::to_string(b), "room" + std::to_string(b % 3), double(rssi(rng)), ts(rng)});
    }
    const auto base = resolve(rs, 3000);
    auto shuffled = rs;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto again = resolve(shuffled, 3000);
    CHECK(base.room_id == again.room_id);
    CHECK(base.beacon_id == again.beacon_id);
    CHECK(base.winning_rssi == again.winning_rssi);
    CHECK(base.readings_considered == again.readings_considered);
    CHECK(base.room_id.has_value() == (base.readings_considered > 0));

    if (base.room_id) {
      auto more = rs;
      more.push_back({"zz_new", "room9", base.winning_rssi - 1.0, 2500});
      const auto after = resolve(more, 3000);
      CHECK(after.room_id == base.room_id);
      CHECK(after.winning_rssi == base.winning_rssi);
    }
  }
}

TEST_CASE("device registry: n x m bijection") {
  const auto table = ssvep::default_table();
  const auto home = control::HomeModel::build({"room_a", "room_b", "room_c"}, table);
  CHECK(home.device_count() == 6);
  CHECK(device_for("room_a", 1, home) == "lamp_a");
  CHECK(device_for("room_b", 2, home) == "fan_b");
  CHECK_THROWS_AS(device_for("room_z", 1, home), LookupError);
  CHECK_THROWS_AS(device_for("room_a", 3, home), LookupError);
  std::set<std::string> ids;
  for (const auto& room : home.rooms()) {
    for (const auto& e : table.entries()) ids.insert(device_for(room, e.class_id, home));
  }
  CHECK(ids.size() == 6);
}

TEST_CASE("path loss model") {
  const PathLossModel quiet{-40.0, 2.5, 0.0};
  CHECK(simulate_rssi(1.0, 1, quiet) == -40.0);
  CHECK(simulate_rssi(10.0, 1, quiet) == doctest::Approx(-65.0).epsilon(1e-12));
  CHECK_THROWS_AS(simulate_rssi(0.0, 1), InvalidInput);
  CHECK_THROWS_AS(simulate_rssi(-2.0, 1), InvalidInput);
  CHECK(simulate_rssi(3.0, 77) == simulate_rssi(3.0, 77));
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int s = 0; s < n; ++s) {
    const double e = simulate_rssi(1.0, static_cast<std::uint64_t>(s)) + 40.0;
    sum += e;
    sq += e * e;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::sqrt(sq / n) == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("reading store hands off between a writer and a reader") {
  ReadingStore store;
  constexpr int kCount = 5000;
  std::jthread writer([&] {
    for (int i = 0; i < kCount; ++i) store.push({"b1", "room_a", -50.0, i});
  });
  std::size_t last = 0;
  while (last < kCount) {
    const auto snap = store.snapshot();
    CHECK(snap.size() >= last);
    for (std::size_t i = 0; i < snap.size(); ++i) CHECK(snap[i].timestamp_ms == static_cast<std::int64_t>(i));
    last = snap.size();
  }
  writer.join();
  CHECK(store.size() == kCount);
  CHECK(store.snapshot_until(99).size() == 100);
}
