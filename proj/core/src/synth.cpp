#include "neurohome/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "neurohome/error.hpp"
#include "neurohome/random.hpp"

namespace neurohome::synth {
namespace {

// Stream tags for derive_seed().
constexpr std::uint64_t kPhaseStream = 1;
constexpr std::uint64_t kSsvepNoiseStream = 2;
constexpr std::uint64_t kBlinkNoiseStream = 3;
constexpr std::uint64_t kBeaconStream = 4;

std::size_t sample_count(const Scenario& sc) {
  return static_cast<std::size_t>(std::llround(sc.duration_s * sc.fs));
}

void add_noise(std::vector<double>& x, double rms, std::uint64_t seed, std::uint64_t stream) {
  if (rms <= 0.0) return;
  auto rng = make_rng(seed, {stream});
  std::normal_distribution<double> noise(0.0, rms);
  for (double& v : x) v += noise(rng);
}

template <typename T, typename Start, typename End>
void check_disjoint(std::vector<T> items, Start start, End end, const char* what) {
  std::sort(items.begin(), items.end(), [&](const T& a, const T& b) { return start(a) < start(b); });
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (start(items[i]) < end(items[i - 1])) throw InvalidInput(std::string("scenario: overlapping ") + what);
  }
}

}  // namespace

void Scenario::validate() const {
  if (fs <= 0) throw InvalidInput("scenario: fs must be positive");
  if (!(duration_s > 0.0)) throw InvalidInput("scenario: duration_s must be positive");
  if (!(harmonic_ratio >= 0.0 && harmonic_ratio <= 2.0)) throw InvalidInput("scenario: harmonic_ratio must lie in [0, 2]");
  if (!(noise_rms >= 0.0) || !(ssvep_amplitude >= 0.0)) {
    throw InvalidInput("scenario: noise_rms and ssvep_amplitude must be non-negative");
  }
  if (!(cue_s >= 0.0 && cue_s <= duration_s)) throw InvalidInput("scenario: cue_s outside [0, duration_s]");
  for (const auto& g : gaze_script) {
    if (!(g.start_s >= 0.0 && g.start_s < g.end_s && g.end_s <= duration_s)) {
      throw InvalidInput("scenario: gaze interval outside [0, duration_s] or empty");
    }
  }
  check_disjoint(gaze_script, [](const auto& g) { return g.start_s; }, [](const auto& g) { return g.end_s; },
                 "gaze intervals");
  for (const auto& b : blink_script) {
    if (!(b.width_ms > 0.0)) throw InvalidInput("scenario: blink width must be positive");
    if (!(b.onset_s >= 0.0 && b.onset_s <= duration_s)) throw InvalidInput("scenario: blink onset outside [0, duration_s]");
  }
  check_disjoint(blink_script, [](const auto& b) { return b.onset_s; },
                 [](const auto& b) { return b.onset_s + b.width_ms / 1000.0; }, "blink pulses");
  for (const auto& b : beacons) {
    if (b.beacon_id.empty() || b.room_id.empty() || !(b.distance_m > 0.0)) {
      throw InvalidInput("scenario: beacons need ids and a positive distance");
    }
  }
}

std::optional<int> Scenario::intended_class() const {
  for (const auto& g : gaze_script) {
    if (g.start_s <= cue_s && cue_s < g.end_s) return g.class_id;
  }
  return std::nullopt;
}

Scenario Scenario::with_feedback_at(double feedback_s) const {
  Scenario out = *this;
  if (blink_reference == BlinkReference::Feedback) {
    for (auto& b : out.blink_script) b.onset_s += feedback_s;
    out.blink_reference = BlinkReference::Absolute;
  }
  return out;
}

double blink_amplitude(const Scenario& sc) { return sc.noise_rms > 0.0 ? 50.0 * sc.noise_rms : 1.0; }

dsp::SignalWindow generate_ssvep_channel(const Scenario& sc, const ssvep::StimulusTable& table) {
  sc.validate();
  dsp::SignalWindow w;
  w.sample_rate = sc.fs;
  w.channel = "O2";
  w.samples.assign(sample_count(sc), 0.0);

  auto phase_rng = make_rng(sc.rng_seed, {kPhaseStream});
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  for (const auto& g : sc.gaze_script) {
    if (!g.class_id) continue;
    if (!table.contains(*g.class_id)) {
      throw InvalidInput("scenario gazes at class " + std::to_string(*g.class_id) + " missing from the stimulus table");
    }
    const double f = table.entry(*g.class_id).frequency_hz;
    const double phi = phase(phase_rng);
    const double phi2 = phase(phase_rng);
    const auto first = static_cast<std::size_t>(std::ceil(g.start_s * sc.fs));
    const auto last = std::min(w.samples.size(), static_cast<std::size_t>(std::ceil(g.end_s * sc.fs)));
    for (std::size_t i = first; i < last; ++i) {
      const double t = static_cast<double>(i) / sc.fs;
      w.samples[i] += sc.ssvep_amplitude * (std::sin(2.0 * std::numbers::pi * f * t + phi) +
                                            sc.harmonic_ratio * std::sin(2.0 * std::numbers::pi * 2.0 * f * t + phi2));
    }
  }
  add_noise(w.samples, sc.noise_rms, sc.rng_seed, kSsvepNoiseStream);
  return w;
}

dsp::SignalWindow generate_blink_channel(const Scenario& sc) {
  sc.validate();
  if (sc.blink_reference != BlinkReference::Absolute) {
    throw InvalidInput("generate_blink_channel: feedback-relative blinks need with_feedback_at() first");
  }
  dsp::SignalWindow w;
  w.sample_rate = sc.fs;
  w.channel = "Fp2";
  w.samples.assign(sample_count(sc), 0.0);

  const double amp = blink_amplitude(sc);
  for (const auto& b : sc.blink_script) {
    const double width_s = b.width_ms / 1000.0;
    const auto first = static_cast<std::size_t>(std::ceil(b.onset_s * sc.fs));
    const auto last = std::min(w.samples.size(), static_cast<std::size_t>(std::ceil((b.onset_s + width_s) * sc.fs)));
    for (std::size_t i = first; i < last; ++i) {
      const double u = (static_cast<double>(i) / sc.fs - b.onset_s) / width_s;
      w.samples[i] += amp * 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
    }
  }
  add_noise(w.samples, sc.noise_rms, sc.rng_seed, kBlinkNoiseStream);
  return w;
}

std::vector<std::string> generate_beacon_stream(const Scenario& sc, int interval_ms, const loc::PathLossModel& model) {
  sc.validate();
  if (interval_ms <= 0) throw InvalidInput("generate_beacon_stream: interval must be positive");
  std::vector<std::string> lines;
  const double end_ms = sc.duration_s * 1000.0;
  for (std::int64_t k = 0; static_cast<double>(k * interval_ms) < end_ms; ++k) {
    for (std::size_t j = 0; j < sc.beacons.size(); ++j) {
      const auto& b = sc.beacons[j];
      const auto seed = derive_seed(sc.rng_seed, {kBeaconStream, j, static_cast<std::uint64_t>(k)});
      const double rssi = std::clamp(loc::simulate_rssi(b.distance_m, seed, model), loc::kMinRssiDbm, loc::kMaxRssiDbm);
      lines.push_back(loc::format_reading({b.beacon_id, b.room_id, rssi, k * interval_ms}));
    }
  }
  return lines;
}

}  // namespace neurohome::synth
