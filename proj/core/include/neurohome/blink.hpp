#pragma once

#include <span>
#include <vector>

#include "neurohome/dsp.hpp"

namespace neurohome::blink {

struct BlinkConfig {
  double sensitivity_c_prime = 5.0;
  double min_width_ms = 200.0;
  int confirm_count = 3;
  double confirm_window_s = 4.0;
  double min_gap_ms = 100.0;  // runs closer than this belong to one blink

  void validate() const;  // throws InvalidInput
};

struct BlinkEvent {
  double onset_s = 0.0;
  double width_ms = 0.0;
  double apex_value = 0.0;
};

// Butterworth bandpass used on the blink channel (order 4, 1-10 Hz).
dsp::FilterSpec blink_filter(int sample_rate);

// sigma = c' * mean |S_j| over the (already bandpassed) window.
double blink_threshold(const dsp::SignalWindow& filtered, const BlinkConfig& cfg);

// Bandpass -> sigma -> peaks of |S| above sigma. Each gated peak is measured at
// half its own apex, merging runs separated by less than min_gap_ms (the
// biphasic lobes of one blink), and kept when that width exceeds
// min_width_ms. Events are returned in onset order.
std::vector<BlinkEvent> detect_blinks(const dsp::SignalWindow& raw, const BlinkConfig& cfg);

// True iff at least confirm_count events have onset in
// [window_start_s, window_start_s + confirm_window_s].
bool confirm(std::span<const BlinkEvent> events, double window_start_s, const BlinkConfig& cfg);

}  // namespace neurohome::blink
