#pragma once

// Slow, obviously-correct reference implementations. Nothing here calls the
// library routine it is used to check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "neurohome/dsp.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

// |X_k| of the zero-padded length-n DFT, O(n * len).
inline std::vector<double> dft_magnitudes(const std::vector<double>& x, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      const double ang = -2.0 * kPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = std::abs(acc);
  }
  return out;
}

inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, bool inverse) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = sign * 2.0 * kPi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = inverse ? acc / static_cast<double>(n) : acc;
  }
  return out;
}

// r[l] = (1/L) sum_t x[t] x[t+l].
inline std::vector<double> direct_acf(const std::vector<double>& x) {
  const std::size_t len = x.size();
  std::vector<double> r(len, 0.0);
  for (std::size_t l = 0; l < len; ++l) {
    for (std::size_t t = 0; t + l < len; ++t) r[l] += x[t] * x[t + l];
    r[l] /= static_cast<double>(len);
  }
  return r;
}

// Scan every bin and keep those whose frequency lies within the band.
inline double scan_band(const std::vector<double>& mags, double bin_width, double center, double half) {
  double sum = 0.0;
  for (std::size_t i = 0; i < mags.size() / 2; ++i) {
    const double f = bin_width * static_cast<double>(i);
    if (f >= center - half - 1e-9 && f <= center + half + 1e-9) sum += mags[i];
  }
  return sum;
}

struct Run {
  std::size_t first, last, apex;
  double apex_value;
};

// Maximal runs above the threshold, apex = first maximum.
inline std::vector<Run> scan_runs(const std::vector<double>& x, double thr) {
  std::vector<Run> runs;
  bool open = false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool above = x[i] > thr;
    if (above && !open) runs.push_back({i, i, i, x[i]});
    if (above) {
      runs.back().last = i;
      if (x[i] > runs.back().apex_value) {
        runs.back().apex_value = x[i];
        runs.back().apex = i;
      }
    }
    open = above;
  }
  return runs;
}

// Closed-form magnitude of an n-th order Butterworth lowpass prototype mapped to
// a bandpass with the bilinear transform and pre-warped corners.
inline double butterworth_bandpass_gain(int prototype_order, double f, double lo, double hi, double fs) {
  const auto warp = [fs](double hz) { return 2.0 * fs * std::tan(kPi * hz / fs); };
  const double w = warp(f), wl = warp(lo), wh = warp(hi);
  const double x = (w * w - wl * wh) / (w * (wh - wl));
  return 1.0 / std::sqrt(1.0 + std::pow(x * x, prototype_order));
}

// Direct-form I with the expanded polynomials.
inline std::vector<double> difference_equation(const std::vector<double>& b, const std::vector<double>& a,
                                               const std::vector<double>& x) {
  std::vector<double> y(x.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < b.size() && k <= n; ++k) acc += b[k] * x[n - k];
    for (std::size_t k = 1; k < a.size() && k <= n; ++k) acc -= a[k] * y[n - k];
    y[n] = acc / a[0];
  }
  return y;
}

inline double db(double gain) { return 20.0 * std::log10(gain); }

inline neurohome::dsp::SignalWindow window(std::vector<double> x, int fs = 512, double start = 0.0) {
  neurohome::dsp::SignalWindow w;
  w.samples = std::move(x);
  w.sample_rate = fs;
  w.start_time = start;
  w.channel = "test";
  return w;
}

inline std::vector<double> sine(double f, double amp, std::size_t n, int fs, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * kPi * f * static_cast<double>(i) / fs + phase);
  return x;
}

inline std::vector<double> gaussian(std::size_t n, double rms, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, rms);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

}  // namespace oracle
