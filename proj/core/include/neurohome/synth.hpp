#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "neurohome/dsp.hpp"
#include "neurohome/localization.hpp"
#include "neurohome/ssvep.hpp"

// Synthetic EEG and beacon traffic used as ground truth for every
// end-to-end test. All generators are pure functions of (scenario, seed).
namespace neurohome::synth {

struct GazeInterval {
  double start_s = 0.0;
  double end_s = 0.0;
  std::optional<int> class_id;  // none = looking at nothing
};

struct BlinkPulse {
  double onset_s = 0.0;
  double width_ms = 250.0;
};

struct BeaconPlacement {
  std::string beacon_id;
  std::string room_id;
  double distance_m = 1.0;  // from the user
};

// Absolute: blink onsets are session times. Feedback: onsets are offsets
// from the feedback instant, resolved by the session runner.
enum class BlinkReference { Absolute, Feedback };

struct Scenario {
  double duration_s = 12.0;
  int fs = 512;
  double cue_s = 4.0;  // when the selection opportunity opens
  std::vector<GazeInterval> gaze_script;
  std::vector<BlinkPulse> blink_script;
  BlinkReference blink_reference = BlinkReference::Absolute;
  double ssvep_amplitude = 1.0;
  double harmonic_ratio = 1.0;  // second-harmonic amplitude / fundamental, in [0, 2]
  double noise_rms = 0.5;
  std::uint64_t rng_seed = 1;
  std::string user_room;
  std::vector<BeaconPlacement> beacons;

  // Throws InvalidInput on overlapping or out-of-range scripts and bad
  // parameters.
  void validate() const;

  // Class of the gaze interval covering the cue, if any.
  std::optional<int> intended_class() const;

  // Copy with feedback-relative blinks shifted to absolute time.
  Scenario with_feedback_at(double feedback_s) const;
};

// Blink pulse height: 50 x noise_rms, or 1.0 for a noise-free scenario.
double blink_amplitude(const Scenario& sc);

// Channel "O2": per gaze interval a*sin(2 pi f t + phi) + r*a*sin(2 pi 2f t + phi2),
// plus white Gaussian noise of RMS noise_rms.
dsp::SignalWindow generate_ssvep_channel(const Scenario& sc, const ssvep::StimulusTable& table);

// Channel "Fp2": raised-cosine pulses plus background noise.
dsp::SignalWindow generate_blink_channel(const Scenario& sc);

// One line per beacon every interval_ms from t = 0 to the end of the
// scenario, RSSI from the path-loss model clamped to [-120, 0].
std::vector<std::string> generate_beacon_stream(const Scenario& sc, int interval_ms,
                                                const loc::PathLossModel& model = {});

}  // namespace neurohome::synth
