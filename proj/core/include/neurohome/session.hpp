#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neurohome/blink.hpp"
#include "neurohome/controller.hpp"
#include "neurohome/home.hpp"
#include "neurohome/localization.hpp"
#include "neurohome/ssvep.hpp"
#include "neurohome/synth.hpp"

// Trial runner and metrics.
namespace neurohome::session {

// What the generated trials look at during the selection opportunity.
enum class StimulusMode {
  Cycle,  // trial i gazes at class (i mod m) + 1 from the cue to the end
  None,   // no gaze at all (false-selection trials)
};

struct SessionConfig {
  ssvep::StimulusTable table = ssvep::default_table();
  blink::BlinkConfig blink;
  std::vector<std::string> rooms{"room_a", "room_b"};
  std::map<control::DeviceKey, std::string> device_ids;  // overrides of the default ids
  double own_room_distance_m = 2.0;
  double other_room_distance_m = 6.0;
  loc::PathLossModel path_loss;
  std::int64_t staleness_ms = loc::kDefaultStalenessMs;
  int beacon_interval_ms = 500;
  double stride_s = 0.5;
  double selection_timeout_s = 0.5;  // decisions run from cue + stride to cue + timeout
  StimulusMode stimulus = StimulusMode::Cycle;
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency

  // Per-trial template. Empty gaze script / user_room / beacons are filled
  // in by trial_scenario(); a non-empty one is used as is.
  synth::Scenario scenario = default_trial_scenario();

  static synth::Scenario default_trial_scenario();
  void validate() const;  // throws InvalidInput
};

struct TrialOutcome {
  std::size_t index = 0;
  std::optional<int> intended_class;
  std::string intended_room;
  std::optional<int> selected_class;
  std::optional<std::string> selected_room;
  std::optional<double> feedback_time_s;
  bool blink_attempted = false;  // reached the confirmation window with scripted blinks
  std::size_t blinks_detected = 0;
  bool confirmed = false;
  std::optional<std::string> toggled_device;
  std::optional<double> response_time_s;  // cue -> toggle
  std::vector<control::LogRecord> log;
};

struct SessionMetrics {
  std::size_t trials = 0;
  std::size_t selection_opportunities = 0;  // trials with an intended class
  std::size_t correct_selections = 0;
  std::size_t no_stimulus_trials = 0;
  std::size_t false_selections = 0;
  std::size_t blink_attempts = 0;
  std::size_t confirmations = 0;
  std::size_t selections = 0;
  std::size_t correct_rooms = 0;
  std::size_t toggles = 0;
  double ssvep_accuracy_pct = 0.0;
  double false_selection_pct = 0.0;
  double blink_accuracy_pct = 0.0;
  double localization_accuracy_pct = 0.0;
  double mean_response_time_s = 0.0;
  double transfer_rate_cmd_per_min = 0.0;
};

// Concrete scenario for trial `index` of a run seeded with `seed`.
synth::Scenario trial_scenario(const SessionConfig& cfg, std::size_t index, std::uint64_t seed);

// Streams the scenario through decide, resolve, the controller and the blink
// detector. Feedback-relative blinks are placed once the feedback time is known.
TrialOutcome run_trial(const synth::Scenario& sc, const SessionConfig& cfg);

// Throws InvalidInput on an empty list.
SessionMetrics aggregate(const std::vector<TrialOutcome>& outcomes);

// cfg.trials trials seeded from cfg.seed, evaluated in parallel; outcomes
// come back in index order regardless of thread count.
std::vector<TrialOutcome> run_trials(const SessionConfig& cfg);

nlohmann::ordered_json config_to_json(const SessionConfig& cfg);
nlohmann::ordered_json metrics_to_json(const SessionMetrics& m);
nlohmann::ordered_json outcome_to_json(const TrialOutcome& o);

// Report object with keys config / metrics / outcomes.
nlohmann::ordered_json make_report(const SessionConfig& cfg, const std::vector<TrialOutcome>& outcomes);

}  // namespace neurohome::session
