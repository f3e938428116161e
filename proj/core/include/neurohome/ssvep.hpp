#pragma once

#include <optional>
#include <string>
#include <vector>

#include "neurohome/dsp.hpp"

namespace neurohome::ssvep {

inline constexpr double kMinFrequencyHz = 6.0;
inline constexpr double kMaxFrequencyHz = 24.0;
inline constexpr double kMinSpacingHz = 0.2;
inline constexpr double kBandHalfWidthHz = 0.05;
inline constexpr double kScoreWindowS = 2.0;
inline constexpr double kThresholdWindowS = 4.0;

struct StimulusEntry {
  int class_id = 0;
  double frequency_hz = 0.0;
  std::string label;  // "lamp", "fan", ... (optional)
};

// Target frequency set with the threshold sensitivity c. Build through
// validate_frequencies(); a constructed table always satisfies:
//   frequencies in [6, 24] Hz, pairwise spacing >= 0.2 Hz,
//   class ids exactly {1..m}.
class StimulusTable {
 public:
  const std::vector<StimulusEntry>& entries() const noexcept { return entries_; }
  double sensitivity_c() const noexcept { return sensitivity_c_; }
  std::size_t size() const noexcept { return entries_.size(); }

  const StimulusEntry& entry(int class_id) const;  // throws LookupError
  bool contains(int class_id) const noexcept;

  StimulusTable with_sensitivity(double c) const;

 private:
  friend StimulusTable validate_frequencies(std::vector<StimulusEntry>, double);
  std::vector<StimulusEntry> entries_;
  double sensitivity_c_ = 2.0;
};

// Throws RangeError naming the offending frequency, SpacingError naming the
// offending pair, InvalidInput for empty lists, bad ids or c <= 0.
StimulusTable validate_frequencies(std::vector<StimulusEntry> entries, double sensitivity_c = 2.0);

// Two-device setup: lamp at 6 Hz (class 1), fan at 8.2 Hz (class 2).
StimulusTable default_table();

struct ClassScore {
  int class_id = 0;
  double value = 0.0;
};

struct SsvepDecision {
  std::vector<ClassScore> scores;
  double threshold_tau = 0.0;
  std::optional<int> selected;
  double window_start = 0.0;
  double window_end = 0.0;
};

// A_k = band power of |FFT(acf(w))| at f_k +- 0.05 Hz plus at 2 f_k +- 0.05 Hz.
// `min_duration_s` is the required window length (2 s for scores).
std::vector<ClassScore> score(const dsp::SignalWindow& w, const StimulusTable& table,
                              double min_duration_s = kScoreWindowS);

// tau = c * mean_k A_k computed over a window of at least 4 s.
double threshold(const dsp::SignalWindow& w4, const StimulusTable& table);

// Selects argmax_k A_k(w2) iff it strictly exceeds threshold(w4); ties go to
// the lowest class id. w2 must be the trailing part of w4.
SsvepDecision decide(const dsp::SignalWindow& w2, const dsp::SignalWindow& w4, const StimulusTable& table);

// Convenience: slices the trailing 2 s and 4 s ending at `end_time` out of a
// longer recording and calls decide().
SsvepDecision decide_at(const dsp::SignalWindow& recording, double end_time, const StimulusTable& table);

}  // namespace neurohome::ssvep
