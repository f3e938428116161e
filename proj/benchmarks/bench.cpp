#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "neurohome/blink.hpp"
#include "neurohome/dsp.hpp"
#include "neurohome/ssvep.hpp"
#include "neurohome/synth.hpp"

using namespace neurohome;

namespace {

dsp::SignalWindow noise_window(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  dsp::SignalWindow w;
  w.sample_rate = 512;
  w.channel = "O2";
  w.samples.resize(n);
  for (auto& v : w.samples) v = g(rng);
  return w;
}

void BM_fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::complex<double>> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = {static_cast<double>(i % 7), 0.0};
  for (auto _ : state) {
    auto copy = data;
    dsp::fft(copy);
    benchmark::DoNotOptimize(copy.data());
  }
}
BENCHMARK(BM_fft)->RangeMultiplier(4)->Range(1024, 16384);

void BM_power_spectrum(benchmark::State& state) {
  const auto w = dsp::autocorrelate(noise_window(1024, 1));
  for (auto _ : state) benchmark::DoNotOptimize(dsp::power_spectrum(w, 16384));
}
BENCHMARK(BM_power_spectrum);

void BM_ssvep_decide(benchmark::State& state) {
  const auto w4 = noise_window(2048, 2);
  const auto w2 = w4.slice(1024, 1024);
  const auto table = ssvep::default_table();
  for (auto _ : state) benchmark::DoNotOptimize(ssvep::decide(w2, w4, table));
}
BENCHMARK(BM_ssvep_decide);

void BM_apply_filter(benchmark::State& state) {
  const auto w = noise_window(3072, 3);
  const auto spec = blink::blink_filter(512);
  for (auto _ : state) benchmark::DoNotOptimize(dsp::apply_filter(spec, w));
}
BENCHMARK(BM_apply_filter);

void BM_detect_blinks(benchmark::State& state) {
  synth::Scenario sc;
  sc.duration_s = 6.0;
  sc.blink_script = {{2.5, 250.0}, {3.3, 250.0}, {4.1, 250.0}};
  const auto raw = synth::generate_blink_channel(sc);
  const blink::BlinkConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(blink::detect_blinks(raw, cfg));
}
BENCHMARK(BM_detect_blinks);

}  // namespace

BENCHMARK_MAIN();
