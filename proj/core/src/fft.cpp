#include <cmath>
#include <numbers>
#include <unordered_map>
#include <utility>

#include "neurohome/dsp.hpp"
#include "neurohome/error.hpp"

namespace neurohome::dsp {
namespace {

// exp(-2 pi i k / n) for k < n/2, cached per thread so concurrent callers
// never share mutable state.
const std::vector<std::complex<double>>& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::vector<std::complex<double>>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> table(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    table[k] = {std::cos(angle), std::sin(angle)};
  }
  return cache.emplace(n, std::move(table)).first->second;
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void fft(std::span<std::complex<double>> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw InvalidInput("fft: length must be a power of two");
  if (n == 1) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  const auto& w = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        std::complex<double> tw = w[k * stride];
        if (inverse) tw = std::conj(tw);
        const auto u = data[start + k];
        const auto v = data[start + k + half] * tw;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }

  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= scale;
  }
}

std::size_t fft_length_for(int sample_rate, std::size_t length, double max_bin_width) {
  if (sample_rate <= 0) throw InvalidInput("fft_length_for: sample_rate must be positive");
  if (!(max_bin_width > 0.0)) throw InvalidInput("fft_length_for: bin width must be positive");
  std::size_t n = 1;
  while (n < length || static_cast<double>(sample_rate) / static_cast<double>(n) > max_bin_width) n <<= 1;
  return n;
}

}  // namespace neurohome::dsp
