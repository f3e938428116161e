#include <doctest.h>

#include <cmath>
#include <random>

#include "neurohome/blink.hpp"
#include "neurohome/error.hpp"
#include "oracles.hpp"

using namespace neurohome;
using namespace neurohome::blink;

namespace {

// Raised-cosine pulses of height `amp` on Gaussian background noise.
dsp::SignalWindow pulses(const std::vector<std::pair<double, double>>& onset_width_ms, double seconds, double amp,
                         double noise, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(seconds * 512);
  auto x = noise > 0 ? oracle::gaussian(n, noise, rng) : std::vector<double>(n, 0.0);
  for (const auto& [onset, width_ms] : onset_width_ms) {
    const double width = width_ms / 1000.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = (static_cast<double>(i) / 512 - onset) / width;
      if (u >= 0.0 && u < 1.0) x[i] += amp * 0.5 * (1.0 - std::cos(2.0 * oracle::kPi * u));
    }
  }
  return oracle::window(x);
}

}  // namespace

TEST_CASE("blink filter is the 1-10 Hz bandpass") {
  const auto f = blink_filter(512);
  CHECK(f.order == 4);
  CHECK(f.low_cut == 1.0);
  CHECK(f.high_cut == 10.0);
  CHECK(f.sample_rate == 512);
}

TEST_CASE("blink threshold arithmetic") {
  BlinkConfig cfg;
  CHECK(blink_threshold(oracle::window(std::vector<double>(1024, 1.0)), cfg) == 5.0);
  std::vector<double> alt(1024);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  CHECK(blink_threshold(oracle::window(alt), cfg) == 5.0);
  CHECK(blink_threshold(oracle::window(std::vector<double>(1024, 0.0)), cfg) == 0.0);
  CHECK_THROWS_AS(blink_threshold(oracle::window({}), cfg), InvalidInput);

  const auto trace = dsp::apply_filter(blink_filter(512), pulses({{0.5, 250}}, 2.0, 25.0, 0.5, 1));
  double direct = 0.0;
  for (double v : trace.samples) direct += std::abs(v);
  direct = 5.0 * direct / static_cast<double>(trace.size());
  CHECK(std::abs(blink_threshold(trace, cfg) - direct) <= 1e-12 * direct);
}

TEST_CASE("three 250 ms blinks are three events") {
  const auto w = pulses({{2.5, 250}, {3.3, 250}, {4.1, 250}}, 6.0, 25.0, 0.5, 2);
  const auto ev = detect_blinks(w, BlinkConfig{});
  REQUIRE(ev.size() == 3);
  for (const auto& e : ev) CHECK(e.width_ms > 200.0);
  CHECK(ev[0].onset_s < ev[1].onset_s);
  CHECK(ev[0].onset_s == doctest::Approx(2.5).epsilon(0.05));
  CHECK(confirm(ev, 2.0, BlinkConfig{}));
}

TEST_CASE("150 ms spikes are never blinks") {
  const auto w = pulses({{2.5, 150}, {3.3, 150}, {4.1, 150}}, 6.0, 25.0, 0.5, 3);
  CHECK(detect_blinks(w, BlinkConfig{}).empty());
}

TEST_CASE("zero signal has no blinks") {
  CHECK(detect_blinks(oracle::window(std::vector<double>(3072, 0.0)), BlinkConfig{}).empty());
}

TEST_CASE("confirm counts onsets inside the closed window") {
  BlinkConfig cfg;
  const std::vector<BlinkEvent> three{{0.5, 250, 1}, {1.5, 250, 1}, {2.5, 250, 1}};
  CHECK(confirm(three, 0.0, cfg));
  CHECK_FALSE(confirm(std::vector<BlinkEvent>(three.begin(), three.begin() + 2), 0.0, cfg));
  CHECK_FALSE(confirm(std::vector<BlinkEvent>{{0.5, 250, 1}, {1.5, 250, 1}, {4.2, 250, 1}}, 0.0, cfg));
  CHECK(confirm(std::vector<BlinkEvent>{{0.0, 250, 1}, {1.5, 250, 1}, {4.0, 250, 1}}, 0.0, cfg));
  CHECK_FALSE(confirm(three, 0.6, cfg));
  CHECK_FALSE(confirm({}, 0.0, cfg));
}

TEST_CASE("property: confirm is monotone in the number of in-window events") {
  BlinkConfig cfg;
  std::vector<BlinkEvent> ev;
  bool was = false;
  for (int i = 0; i < 8; ++i) {
    ev.push_back({0.3 + 0.45 * i, 250, 1});
    const bool now = confirm(ev, 0.0, cfg);
    if (was) CHECK(now);
    was = now;
  }
  CHECK(was);
}

TEST_CASE("config validation") {
  BlinkConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.confirm_count = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.sensitivity_c_prime = -1.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.min_width_ms = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("property: detected set invariant under positive scaling") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> alpha(0.1, 10.0), width(120.0, 320.0), gap(0.45, 0.9);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<double, double>> script;
    for (double t = 2.3; t < 5.3;) {
      const double wdt = width(rng);
      script.push_back({t, wdt});
      t += wdt / 1000.0 + gap(rng);
    }
    const auto w = pulses(script, 6.0, 25.0, 0.5, 100 + trial);
    auto ws = w;
    const double a = alpha(rng);
    for (auto& v : ws.samples) v *= a;
    const auto e1 = detect_blinks(w, BlinkConfig{});
    const auto e2 = detect_blinks(ws, BlinkConfig{});
    REQUIRE(e1.size() == e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i) {
      CHECK(e1[i].onset_s == e2[i].onset_s);
      CHECK(e1[i].width_ms == e2[i].width_ms);
    }
  }
}

TEST_CASE("property: every event is wider than the minimum, count monotone in c'") {
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> width(150.0, 260.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::pair<double, double>> script;
    for (int k = 0; k < 3; ++k) script.push_back({2.4 + 0.8 * k, width(rng)});
    const auto w = pulses(script, 6.0, 25.0, 0.5, 200 + trial);
    std::size_t prev = SIZE_MAX;
    for (double cp : {0.5, 1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 20.0}) {
      BlinkConfig cfg;
      cfg.sensitivity_c_prime = cp;
      const auto ev = detect_blinks(w, cfg);
      for (const auto& e : ev) CHECK(e.width_ms > cfg.min_width_ms);
      CHECK(ev.size() <= prev);
      prev = ev.size();
    }
  }
}
