#include "neurohome/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "neurohome/error.hpp"

namespace neurohome::dsp {

using cplx = std::complex<double>;

SignalWindow SignalWindow::slice(std::size_t first, std::size_t count) const {
  if (first > samples.size() || count > samples.size() - first) {
    throw InvalidInput("slice: range exceeds window of " + std::to_string(samples.size()) + " samples");
  }
  SignalWindow out;
  out.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(first),
                     samples.begin() + static_cast<std::ptrdiff_t>(first + count));
  out.sample_rate = sample_rate;
  out.channel = channel;
  out.start_time = start_time + static_cast<double>(first) / sample_rate;
  return out;
}

SignalWindow SignalWindow::between(double from_s, double to_s) const {
  const auto index_of = [&](double t) {
    const double i = std::round((t - start_time) * sample_rate);
    return static_cast<std::size_t>(std::clamp(i, 0.0, static_cast<double>(samples.size())));
  };
  const std::size_t first = index_of(from_s);
  const std::size_t last = index_of(to_s);
  if (last <= first) throw InvalidInput("between: empty time range");
  return slice(first, last - first);
}

void validate(const SignalWindow& w) {
  if (w.sample_rate <= 0) throw InvalidInput("signal window: sample_rate must be positive");
  if (w.samples.empty()) throw InvalidInput("signal window '" + w.channel + "' is empty");
}

SignalWindow autocorrelate(const SignalWindow& w) {
  validate(w);
  const std::size_t len = w.samples.size();
  std::size_t n = 1;
  while (n < 2 * len) n <<= 1;

  std::vector<cplx> buf(n);
  std::copy(w.samples.begin(), w.samples.end(), buf.begin());
  fft(buf);
  for (auto& x : buf) x = std::norm(x);
  fft(buf, /*inverse=*/true);

  SignalWindow out;
  out.sample_rate = w.sample_rate;
  out.channel = w.channel + "+acf";
  out.start_time = w.start_time;
  out.samples.resize(len);
  const double inv_len = 1.0 / static_cast<double>(len);
  for (std::size_t l = 0; l < len; ++l) out.samples[l] = buf[l].real() * inv_len;
  return out;
}

PowerSpectrum power_spectrum(const SignalWindow& w, std::size_t fft_length) {
  validate(w);
  if (!is_power_of_two(fft_length)) throw InvalidInput("power_spectrum: fft_length must be a power of two");
  if (fft_length < w.samples.size()) {
    throw InvalidInput("power_spectrum: fft_length " + std::to_string(fft_length) +
                       " shorter than window of " + std::to_string(w.samples.size()));
  }
  std::vector<cplx> buf(fft_length);
  std::copy(w.samples.begin(), w.samples.end(), buf.begin());
  fft(buf);

  PowerSpectrum p;
  p.bin_width = static_cast<double>(w.sample_rate) / static_cast<double>(fft_length);
  p.source_length = w.samples.size();
  p.magnitudes.resize(fft_length);
  for (std::size_t i = 0; i < fft_length; ++i) p.magnitudes[i] = std::abs(buf[i]);
  return p;
}

double band_power(const PowerSpectrum& p, double center, double half_width) {
  if (!std::isfinite(center) || !std::isfinite(half_width) || half_width < 0.0) {
    throw InvalidInput("band_power: center and half_width must be finite, half_width >= 0");
  }
  if (p.magnitudes.empty() || !(p.bin_width > 0.0)) throw InvalidInput("band_power: empty spectrum");
  if (!(center + half_width < p.nyquist())) {
    throw InvalidInput("band_power: band edge " + std::to_string(center + half_width) +
                       " Hz reaches Nyquist " + std::to_string(p.nyquist()) + " Hz");
  }
  // Inclusive edges; the epsilon absorbs representation error in f/bin_width.
  constexpr double eps = 1e-9;
  const double lo_edge = std::max(0.0, center - half_width);
  const double first = std::ceil(lo_edge / p.bin_width - eps);
  const double last = std::floor((center + half_width) / p.bin_width + eps);
  double sum = 0.0;
  for (double i = std::max(first, 0.0); i <= last; i += 1.0) sum += p.magnitudes[static_cast<std::size_t>(i)];
  return sum;
}

std::vector<double> FilterSpec::feedforward() const {
  std::vector<double> poly{1.0};
  for (const auto& s : sections) {
    std::vector<double> next(poly.size() + 2, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i] * s.b0;
      next[i + 1] += poly[i] * s.b1;
      next[i + 2] += poly[i] * s.b2;
    }
    poly = std::move(next);
  }
  return poly;
}

std::vector<double> FilterSpec::feedback() const {
  std::vector<double> poly{1.0};
  for (const auto& s : sections) {
    std::vector<double> next(poly.size() + 2, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] += poly[i] * s.a1;
      next[i + 2] += poly[i] * s.a2;
    }
    poly = std::move(next);
  }
  return poly;
}

std::complex<double> FilterSpec::response(double frequency_hz) const {
  const double omega = 2.0 * std::numbers::pi * frequency_hz / sample_rate;
  const cplx z1 = std::polar(1.0, -omega);
  const cplx z2 = z1 * z1;
  cplx h{1.0, 0.0};
  for (const auto& s : sections) h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  return h;
}

FilterSpec design_bandpass(int order, double low_hz, double high_hz, int sample_rate) {
  if (order <= 0 || order % 2 != 0) {
    throw InvalidInput("design_bandpass: order must be a positive even number, got " + std::to_string(order));
  }
  if (sample_rate <= 0) throw InvalidInput("design_bandpass: sample_rate must be positive");
  const double nyquist = sample_rate / 2.0;
  if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist)) {
    throw InvalidInput("design_bandpass: need 0 < low < high < fs/2, got low=" + std::to_string(low_hz) +
                       " high=" + std::to_string(high_hz) + " fs=" + std::to_string(sample_rate));
  }

  const int proto_order = order / 2;
  const double fs2 = 2.0 * sample_rate;
  const double w_lo = fs2 * std::tan(std::numbers::pi * low_hz / sample_rate);
  const double w_hi = fs2 * std::tan(std::numbers::pi * high_hz / sample_rate);
  const double bw = w_hi - w_lo;
  const double w0_sq = w_lo * w_hi;

  // Lowpass prototype poles -> bandpass poles -> z-plane.
  std::vector<cplx> poles;
  for (int k = 0; k < proto_order; ++k) {
    const double angle = std::numbers::pi * (2.0 * k + proto_order + 1.0) / (2.0 * proto_order);
    const cplx p = std::polar(1.0, angle) * (bw / 2.0);
    const cplx root = std::sqrt(p * p - w0_sq);
    for (const cplx s : {p + root, p - root}) poles.push_back((fs2 + s) / (fs2 - s));
  }

  std::vector<cplx> upper;
  std::vector<double> real;
  for (const auto& z : poles) {
    if (std::abs(z.imag()) <= 1e-12 * std::abs(z)) {
      real.push_back(z.real());
    } else if (z.imag() > 0.0) {
      upper.push_back(z);
    }
  }
  std::sort(real.begin(), real.end());

  FilterSpec spec;
  spec.order = order;
  spec.low_cut = low_hz;
  spec.high_cut = high_hz;
  spec.sample_rate = sample_rate;
  // Each section carries one zero at z = 1 and one at z = -1.
  for (const auto& z : upper) spec.sections.push_back({1.0, 0.0, -1.0, -2.0 * z.real(), std::norm(z)});
  for (std::size_t i = 0; i + 1 < real.size(); i += 2) {
    spec.sections.push_back({1.0, 0.0, -1.0, -(real[i] + real[i + 1]), real[i] * real[i + 1]});
  }
  if (spec.sections.size() != static_cast<std::size_t>(proto_order)) {
    throw InvalidInput("design_bandpass: could not pair poles into second-order sections");
  }

  // Unit gain at the pre-warped geometric centre, spread evenly over sections.
  const double center_hz = sample_rate / std::numbers::pi * std::atan(std::sqrt(w0_sq) / fs2);
  const double gain = std::abs(spec.response(center_hz));
  const double per_section = std::pow(gain, -1.0 / static_cast<double>(spec.sections.size()));
  for (auto& s : spec.sections) {
    s.b0 *= per_section;
    s.b1 *= per_section;
    s.b2 *= per_section;
  }
  return spec;
}

std::vector<double> filter_samples(const FilterSpec& spec, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  for (const auto& s : spec.sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return y;
}

SignalWindow apply_filter(const FilterSpec& spec, const SignalWindow& w) {
  validate(w);
  if (spec.sample_rate != w.sample_rate) {
    throw InvalidInput("apply_filter: filter designed for " + std::to_string(spec.sample_rate) +
                       " Hz, window sampled at " + std::to_string(w.sample_rate) + " Hz");
  }
  SignalWindow out;
  out.samples = filter_samples(spec, w.samples);
  out.sample_rate = w.sample_rate;
  out.channel = w.channel;
  out.start_time = w.start_time;
  return out;
}

std::vector<Peak> extract_peaks(const SignalWindow& w, double threshold) {
  if (!std::isfinite(threshold)) throw InvalidInput("extract_peaks: threshold must be finite");
  if (w.sample_rate <= 0) throw InvalidInput("extract_peaks: sample_rate must be positive");
  std::vector<Peak> peaks;
  const auto& x = w.samples;
  std::size_t i = 0;
  while (i < x.size()) {
    if (!(x[i] > threshold)) {
      ++i;
      continue;
    }
    Peak pk;
    pk.start_index = i;
    pk.apex_index = i;
    pk.apex_value = x[i];
    while (i + 1 < x.size() && x[i + 1] > threshold) {
      ++i;
      if (x[i] > pk.apex_value) {
        pk.apex_value = x[i];
        pk.apex_index = i;
      }
    }
    pk.end_index = i;
    pk.width_ms = static_cast<double>(pk.end_index - pk.start_index + 1) / w.sample_rate * 1000.0;
    peaks.push_back(pk);
    ++i;
  }
  return peaks;
}

}  // namespace neurohome::dsp
