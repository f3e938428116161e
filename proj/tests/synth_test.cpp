#include <doctest.h>

#include <cmath>

#include "neurohome/blink.hpp"
#include "neurohome/error.hpp"
#include "neurohome/localization.hpp"
#include "neurohome/ssvep.hpp"
#include "neurohome/synth.hpp"

using namespace neurohome;
using namespace neurohome::synth;

namespace {

Scenario gaze_at(std::optional<int> cls, double noise = 0.0) {
  Scenario sc;
  sc.duration_s = 4.0;
  sc.noise_rms = noise;
  sc.gaze_script = {{0.0, 4.0, cls}};
  return sc;
}

}  // namespace

TEST_CASE("noise-free 6 Hz gaze dominates the 8.2 Hz score") {
  const auto w = generate_ssvep_channel(gaze_at(1), ssvep::default_table());
  CHECK(w.channel == "O2");
  CHECK(w.size() == 2048);
  const auto s = ssvep::score(w.between(2.0, 4.0), ssvep::default_table());
  CHECK(s[0].value / s[1].value > 10.0);
}

TEST_CASE("no gaze and no noise is a zero channel") {
  for (double v : generate_ssvep_channel(gaze_at(std::nullopt), ssvep::default_table()).samples) CHECK(v == 0.0);
  Scenario sc;
  sc.noise_rms = 0.0;
  for (double v : generate_blink_channel(sc).samples) CHECK(v == 0.0);
}

TEST_CASE("generators are deterministic in the seed") {
  auto sc = gaze_at(2, 0.5);
  sc.blink_script = {{1.0, 250.0}};
  const auto a = generate_ssvep_channel(sc, ssvep::default_table());
  const auto b = generate_ssvep_channel(sc, ssvep::default_table());
  CHECK(a.samples == b.samples);
  CHECK(generate_blink_channel(sc).samples == generate_blink_channel(sc).samples);
  sc.rng_seed = 2;
  CHECK(generate_ssvep_channel(sc, ssvep::default_table()).samples != a.samples);
}

TEST_CASE("noise has the requested RMS") {
  Scenario sc;
  sc.duration_s = 60.0;
  sc.noise_rms = 0.5;
  const auto w = generate_ssvep_channel(sc, ssvep::default_table());
  double sq = 0.0;
  for (double v : w.samples) sq += v * v;
  CHECK(std::sqrt(sq / w.size()) == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("without a harmonic the 2f band is at most 1% of the f band") {
  auto sc = gaze_at(1);
  sc.harmonic_ratio = 0.0;
  const auto w = generate_ssvep_channel(sc, ssvep::default_table());
  const auto p = dsp::power_spectrum(w, dsp::fft_length_for(512, w.size()));
  CHECK(dsp::band_power(p, 12.0, 0.05) <= 0.01 * dsp::band_power(p, 6.0, 0.05));
}

TEST_CASE("blink pulses: shape, height, and the width rule") {
  Scenario sc;
  sc.duration_s = 6.0;
  sc.noise_rms = 0.0;
  sc.blink_script = {{1.0, 250.0}};
  const auto w = generate_blink_channel(sc);
  CHECK(w.channel == "Fp2");
  double peak = 0.0;
  for (double v : w.samples) peak = std::max(peak, v);
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-4));
  sc.noise_rms = 0.5;
  CHECK(blink_amplitude(sc) == 25.0);

  sc.blink_script = {{2.5, 250.0}, {3.3, 250.0}, {4.1, 250.0}};
  CHECK(blink::detect_blinks(generate_blink_channel(sc), {}).size() == 3);
  sc.blink_script = {{3.0, 150.0}};
  CHECK(blink::detect_blinks(generate_blink_channel(sc), {}).empty());
}

TEST_CASE("scenario validation") {
  Scenario sc;
  sc.blink_script = {{1.0, 250.0}, {1.2, 250.0}};
  CHECK_THROWS_AS(generate_blink_channel(sc), InvalidInput);
  sc = Scenario{};
  sc.gaze_script = {{0.0, 5.0, 1}, {4.0, 6.0, 2}};
  CHECK_THROWS_AS(sc.validate(), InvalidInput);
  sc.gaze_script = {{0.0, 13.0, 1}};
  CHECK_THROWS_AS(sc.validate(), InvalidInput);
  sc = Scenario{};
  sc.fs = 0;
  CHECK_THROWS_AS(sc.validate(), InvalidInput);
  sc = Scenario{};
  sc.harmonic_ratio = 2.5;
  CHECK_THROWS_AS(sc.validate(), InvalidInput);
  sc = Scenario{};
  sc.gaze_script = {{0.0, 4.0, 3}};
  CHECK_THROWS_AS(generate_ssvep_channel(sc, ssvep::default_table()), InvalidInput);
}

TEST_CASE("feedback-relative blinks are placed at run time") {
  Scenario sc;
  sc.blink_reference = BlinkReference::Feedback;
  sc.blink_script = {{0.5, 250.0}, {1.3, 250.0}};
  CHECK_THROWS_AS(generate_blink_channel(sc), InvalidInput);
  const auto placed = sc.with_feedback_at(4.5);
  CHECK(placed.blink_reference == BlinkReference::Absolute);
  CHECK(placed.blink_script[0].onset_s == 5.0);
  CHECK(placed.blink_script[1].onset_s == 5.8);
}

TEST_CASE("intended class is the gaze covering the cue") {
  Scenario sc;
  sc.gaze_script = {{0.0, 3.0, 2}, {4.0, 12.0, 1}};
  CHECK(sc.intended_class() == 1);
  sc.cue_s = 3.5;
  CHECK_FALSE(sc.intended_class());
}

TEST_CASE("beacon stream: counts, order, protocol, nearest room wins") {
  Scenario sc;
  sc.duration_s = 10.0;
  sc.beacons = {{"b_a", "room_a", 2.0}, {"b_b", "room_b", 6.0}};
  const auto lines = generate_beacon_stream(sc, 500);
  CHECK(lines.size() == 40);
  std::vector<loc::BeaconReading> rs;
  for (const auto& l : lines) {
    rs.push_back(loc::parse_reading(l));
    CHECK(loc::format_reading(rs.back()) == l);
  }
  for (std::size_t i = 1; i < rs.size(); ++i) CHECK(rs[i].timestamp_ms >= rs[i - 1].timestamp_ms);

  const loc::PathLossModel quiet{-40.0, 2.5, 0.0};
  std::vector<loc::BeaconReading> q;
  for (const auto& l : generate_beacon_stream(sc, 500, quiet)) q.push_back(loc::parse_reading(l));
  for (std::int64_t t = 0; t < 10000; t += 250) CHECK(*loc::resolve(q, t).room_id == "room_a");
  CHECK_THROWS_AS(generate_beacon_stream(sc, 0), InvalidInput);
}
