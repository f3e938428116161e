#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace neurohome::dsp {

// A fixed-rate sampled segment of one channel.
struct SignalWindow {
  std::vector<double> samples;
  int sample_rate = 512;
  std::string channel;
  double start_time = 0.0;  // seconds since session start

  std::size_t size() const noexcept { return samples.size(); }
  double duration() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  double end_time() const noexcept { return start_time + duration(); }

  // Sub-window of `count` samples starting at sample `first`; start_time follows.
  SignalWindow slice(std::size_t first, std::size_t count) const;
  // Sub-window covering [from_s, to_s) in session time, rounded to whole samples.
  SignalWindow between(double from_s, double to_s) const;
};

// Throws InvalidInput unless the window is non-empty with a positive rate.
void validate(const SignalWindow& w);

// Magnitude spectrum. Bin i sits at i * bin_width Hz; all fft_length bins are
// kept, so the upper half mirrors the lower half for real input.
struct PowerSpectrum {
  double bin_width = 0.0;
  std::vector<double> magnitudes;
  std::size_t source_length = 0;

  std::size_t fft_length() const noexcept { return magnitudes.size(); }
  double nyquist() const noexcept { return bin_width * static_cast<double>(magnitudes.size()) / 2.0; }
  double frequency(std::size_t bin) const noexcept { return bin_width * static_cast<double>(bin); }
};

// One second-order section, a0 normalised to 1:
//   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

struct FilterSpec {
  int order = 4;
  double low_cut = 1.0;
  double high_cut = 10.0;
  int sample_rate = 512;
  std::vector<Biquad> sections;

  // Expanded transfer-function polynomials in z^-1 (index = power of z^-1).
  std::vector<double> feedforward() const;
  std::vector<double> feedback() const;
  // H(e^{j 2 pi f / fs}).
  std::complex<double> response(double frequency_hz) const;
};

struct Peak {
  std::size_t start_index = 0;
  std::size_t end_index = 0;
  std::size_t apex_index = 0;
  double width_ms = 0.0;
  double apex_value = 0.0;
};

// In-place iterative radix-2 transform; size must be a power of two.
void fft(std::span<std::complex<double>> data, bool inverse = false);

bool is_power_of_two(std::size_t n) noexcept;

// Smallest power of two >= `length` whose bin width fs/N is <= max_bin_width.
std::size_t fft_length_for(int sample_rate, std::size_t length, double max_bin_width = 0.05);

// One-sided biased autocorrelation r[l] = (1/L) sum_t x[t] x[t+l], l = 0..L-1.
SignalWindow autocorrelate(const SignalWindow& w);

// Zero-padded DFT magnitude, bin_width = sample_rate / fft_length.
PowerSpectrum power_spectrum(const SignalWindow& w, std::size_t fft_length);

// Sum of magnitudes over bins with frequency in [center - half_width, center + half_width].
double band_power(const PowerSpectrum& p, double center, double half_width);

// Butterworth bandpass of total order `order` (even) via the bilinear
// transform with pre-warped corners, realised as order/2 biquads.
FilterSpec design_bandpass(int order, double low_hz, double high_hz, int sample_rate);

// Causal single pass, zero initial state.
SignalWindow apply_filter(const FilterSpec& spec, const SignalWindow& w);
std::vector<double> filter_samples(const FilterSpec& spec, std::span<const double> x);

// One peak per maximal run of samples strictly above `threshold`, in time order.
std::vector<Peak> extract_peaks(const SignalWindow& w, double threshold);

}  // namespace neurohome::dsp
