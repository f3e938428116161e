#include "neurohome/ssvep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "neurohome/error.hpp"

namespace neurohome::ssvep {
namespace {

std::string hz(double f) {
  std::ostringstream os;
  os << f << " Hz";
  return os.str();
}

}  // namespace

const StimulusEntry& StimulusTable::entry(int class_id) const {
  for (const auto& e : entries_) {
    if (e.class_id == class_id) return e;
  }
  throw LookupError("no stimulus class " + std::to_string(class_id));
}

bool StimulusTable::contains(int class_id) const noexcept {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.class_id == class_id; });
}

StimulusTable StimulusTable::with_sensitivity(double c) const { return validate_frequencies(entries_, c); }

StimulusTable validate_frequencies(std::vector<StimulusEntry> entries, double sensitivity_c) {
  if (entries.empty()) throw InvalidInput("stimulus table: no entries");
  if (!(sensitivity_c > 0.0) || !std::isfinite(sensitivity_c)) {
    throw InvalidInput("stimulus table: sensitivity c must be positive");
  }
  for (const auto& e : entries) {
    if (!std::isfinite(e.frequency_hz) || e.frequency_hz < kMinFrequencyHz || e.frequency_hz > kMaxFrequencyHz) {
      throw RangeError("stimulus class " + std::to_string(e.class_id) + ": frequency " + hz(e.frequency_hz) +
                       " outside [6, 24] Hz");
    }
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      // Small tolerance so 6.0 and 6.2 (gap 0.2000000000000002 or 0.19999999) count as legal.
      if (std::abs(entries[i].frequency_hz - entries[j].frequency_hz) < kMinSpacingHz - 1e-9) {
        throw SpacingError("stimulus classes " + std::to_string(entries[i].class_id) + " (" +
                           hz(entries[i].frequency_hz) + ") and " + std::to_string(entries[j].class_id) + " (" +
                           hz(entries[j].frequency_hz) + ") closer than 0.2 Hz");
      }
    }
  }
  std::vector<int> ids;
  for (const auto& e : entries) ids.push_back(e.class_id);
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] != static_cast<int>(i) + 1) {
      throw InvalidInput("stimulus table: class ids must be unique and contiguous from 1");
    }
  }

  StimulusTable t;
  t.entries_ = std::move(entries);
  t.sensitivity_c_ = sensitivity_c;
  return t;
}

StimulusTable default_table() { return validate_frequencies({{1, 6.0, "lamp"}, {2, 8.2, "fan"}}, 2.0); }

std::vector<ClassScore> score(const dsp::SignalWindow& w, const StimulusTable& table, double min_duration_s) {
  dsp::validate(w);
  // Half a sample of slack so 1024 samples at 512 Hz count as 2 s.
  if (w.duration() + 0.5 / w.sample_rate < min_duration_s) {
    throw InvalidInput("ssvep score: window of " + std::to_string(w.duration()) + " s shorter than " +
                       std::to_string(min_duration_s) + " s");
  }
  const auto acf = dsp::autocorrelate(w);
  const auto spectrum = dsp::power_spectrum(acf, dsp::fft_length_for(w.sample_rate, acf.size()));

  std::vector<ClassScore> out;
  out.reserve(table.size());
  for (const auto& e : table.entries()) {
    const double a = dsp::band_power(spectrum, e.frequency_hz, kBandHalfWidthHz) +
                     dsp::band_power(spectrum, 2.0 * e.frequency_hz, kBandHalfWidthHz);
    out.push_back({e.class_id, a});
  }
  return out;
}

double threshold(const dsp::SignalWindow& w4, const StimulusTable& table) {
  const auto scores = score(w4, table, kThresholdWindowS);
  double sum = 0.0;
  for (const auto& s : scores) sum += s.value;
  return table.sensitivity_c() * sum / static_cast<double>(scores.size());
}

SsvepDecision decide(const dsp::SignalWindow& w2, const dsp::SignalWindow& w4, const StimulusTable& table) {
  dsp::validate(w2);
  dsp::validate(w4);
  const double half_sample = 0.5 / w4.sample_rate;
  if (w2.sample_rate != w4.sample_rate || std::abs(w2.end_time() - w4.end_time()) > half_sample ||
      w2.start_time + half_sample < w4.start_time) {
    throw InvalidInput("ssvep decide: score window must be the trailing part of the threshold window");
  }

  SsvepDecision d;
  d.scores = score(w2, table);
  d.threshold_tau = threshold(w4, table);
  d.window_start = w2.start_time;
  d.window_end = w2.end_time();

  // Strict '>' keeps the first (lowest id after sorting) on ties.
  std::vector<ClassScore> ordered = d.scores;
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.class_id < b.class_id; });
  const ClassScore* best = &ordered.front();
  for (const auto& s : ordered) {
    if (s.value > best->value) best = &s;
  }
  if (best->value > d.threshold_tau) d.selected = best->class_id;
  return d;
}

SsvepDecision decide_at(const dsp::SignalWindow& recording, double end_time, const StimulusTable& table) {
  const auto w4 = recording.between(end_time - kThresholdWindowS, end_time);
  const auto w2 = recording.between(end_time - kScoreWindowS, end_time);
  return decide(w2, w4, table);
}

}  // namespace neurohome::ssvep
