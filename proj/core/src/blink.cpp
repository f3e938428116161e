#include "neurohome/blink.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "neurohome/error.hpp"

namespace neurohome::blink {
namespace {

struct Span {
  std::size_t first;
  std::size_t last;
};

// Widest run of samples above `level` around `apex`, bridging dips shorter
// than `max_gap` samples.
Span half_level_span(const std::vector<double>& a, std::size_t apex, double level, std::size_t max_gap) {
  Span s{apex, apex};
  for (std::size_t i = apex, gap = 0; i-- > 0;) {
    if (a[i] > level) {
      s.first = i;
      gap = 0;
    } else if (++gap >= max_gap) {
      break;
    }
  }
  for (std::size_t i = apex + 1, gap = 0; i < a.size(); ++i) {
    if (a[i] > level) {
      s.last = i;
      gap = 0;
    } else if (++gap >= max_gap) {
      break;
    }
  }
  return s;
}

}  // namespace

void BlinkConfig::validate() const {
  if (!(sensitivity_c_prime > 0.0) || !(min_width_ms > 0.0) || !(confirm_window_s > 0.0) || !(min_gap_ms > 0.0) ||
      confirm_count < 1) {
    throw InvalidInput("blink config: all fields must be positive and confirm_count >= 1");
  }
}

dsp::FilterSpec blink_filter(int sample_rate) { return dsp::design_bandpass(4, 1.0, 10.0, sample_rate); }

double blink_threshold(const dsp::SignalWindow& filtered, const BlinkConfig& cfg) {
  dsp::validate(filtered);
  cfg.validate();
  double sum = 0.0;
  for (double s : filtered.samples) sum += std::abs(s);
  return cfg.sensitivity_c_prime * sum / static_cast<double>(filtered.samples.size());
}

std::vector<BlinkEvent> detect_blinks(const dsp::SignalWindow& raw, const BlinkConfig& cfg) {
  cfg.validate();
  dsp::validate(raw);
  const auto filtered = dsp::apply_filter(blink_filter(raw.sample_rate), raw);
  const double sigma = blink_threshold(filtered, cfg);

  dsp::SignalWindow rectified = filtered;
  for (double& s : rectified.samples) s = std::abs(s);
  const auto& a = rectified.samples;

  // Every sample above sigma is a candidate apex. Visiting them tallest first
  // means a higher sigma only truncates this sequence, so the event set can
  // only shrink as c' grows.
  std::vector<std::size_t> order;
  for (const auto& pk : dsp::extract_peaks(rectified, sigma)) {
    for (std::size_t i = pk.start_index; i <= pk.end_index; ++i) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return a[l] > a[r]; });

  const auto max_gap =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.min_gap_ms * raw.sample_rate / 1000.0)));
  std::vector<bool> covered(a.size(), false);
  std::vector<BlinkEvent> events;
  for (std::size_t apex : order) {
    if (covered[apex]) continue;
    const Span s = half_level_span(a, apex, a[apex] / 2.0, max_gap);
    const bool overlaps = std::any_of(covered.begin() + static_cast<std::ptrdiff_t>(s.first),
                                      covered.begin() + static_cast<std::ptrdiff_t>(s.last) + 1,
                                      [](bool c) { return c; });
    std::fill(covered.begin() + static_cast<std::ptrdiff_t>(s.first),
              covered.begin() + static_cast<std::ptrdiff_t>(s.last) + 1, true);
    if (overlaps) continue;  // shoulder of a complex already measured

    const double width_ms = static_cast<double>(s.last - s.first + 1) / raw.sample_rate * 1000.0;
    if (width_ms > cfg.min_width_ms) {
      events.push_back({raw.start_time + static_cast<double>(s.first) / raw.sample_rate, width_ms, a[apex]});
    }
  }
  std::sort(events.begin(), events.end(), [](const auto& l, const auto& r) { return l.onset_s < r.onset_s; });
  return events;
}

bool confirm(std::span<const BlinkEvent> events, double window_start_s, const BlinkConfig& cfg) {
  const double window_end = window_start_s + cfg.confirm_window_s;
  const auto in_window = std::count_if(events.begin(), events.end(), [&](const BlinkEvent& e) {
    return e.onset_s >= window_start_s && e.onset_s <= window_end;
  });
  return in_window >= cfg.confirm_count;
}

}  // namespace neurohome::blink
