// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "beamsep/beamform.hpp"
#include "beamsep/metrics.hpp"
#include "beamsep/rng.hpp"
#include "beamsep/room.hpp"
#include "beamsep/stft.hpp"

using namespace beamsep;

namespace {

MultiChannelWaveform random_wave(size_t channels, size_t samples) {
  Rng rng(1);
  MultiChannelWaveform w(channels, samples, 16000);
  for (auto &v : w.data) v = rng.normal();
  return w;
}

}  // namespace

static void BM_Stft(benchmark::State &state) {
  const StftConfig cfg;
  const MultiChannelWaveform wave = random_wave(15, 48000);
  for (auto _ : state) {
    ComplexSpectrogram spec = stft(wave, cfg);
    benchmark::DoNotOptimize(spec.data.data());
  }
  state.SetItemsProcessed(state.iterations() * 15 * 48000);
}
BENCHMARK(BM_Stft)->Unit(benchmark::kMillisecond);

static void BM_Istft(benchmark::State &state) {
  const StftConfig cfg;
  const MultiChannelWaveform wave = random_wave(1, 48000);
  const ComplexSpectrogram spec = stft(wave, cfg);
  for (auto _ : state) {
    MultiChannelWaveform out = istft(spec, cfg, 48000);
    benchmark::DoNotOptimize(out.data.data());
  }
}
BENCHMARK(BM_Istft)->Unit(benchmark::kMillisecond);

static void BM_Rir(benchmark::State &state) {
  RoomSpec room;
  room.dimensions = {6.0, 5.0, 3.0};
  room.t60 = 0.3;
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ImpulseResponse ir =
        simulate_rir(room, {2.0, 3.0, 1.5}, {4.0, 2.0, 1.4}, order);
    benchmark::DoNotOptimize(ir.taps.data());
  }
}
BENCHMARK(BM_Rir)->Arg(8)->Arg(16)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_MvdrSolve(benchmark::State &state) {
  Rng rng(2);
  const size_t C = 15, F = 257;
  PsdSet speech(F, C), noise(F, C);
  for (size_t f = 0; f < F; ++f) {
    std::vector<cplx> b(C * C);
    for (auto &v : b) v = cplx(rng.normal(), rng.normal());
    for (size_t r = 0; r < C; ++r)
      for (size_t c = 0; c < C; ++c) {
        cplx acc(0.0, 0.0);
        for (size_t k = 0; k < C; ++k)
          acc += b[r * C + k] * std::conj(b[c * C + k]);
        noise.at(f, r, c) = acc;
        speech.at(f, r, c) = r == c ? 1.0 : 0.1;
      }
  }
  for (auto _ : state) {
    BeamformerWeights w = mvdr_from_psd(speech, noise, 0);
    benchmark::DoNotOptimize(w.values.data());
  }
  state.SetItemsProcessed(state.iterations() * F);
}
BENCHMARK(BM_MvdrSolve)->Unit(benchmark::kMillisecond);

static void BM_SiSnr(benchmark::State &state) {
  const MultiChannelWaveform a = random_wave(1, 48000);
  MultiChannelWaveform b = a;
  Rng rng(3);
  for (auto &v : b.data) v += 0.3 * rng.normal();
  for (auto _ : state) {
    SiSnrResult r = si_snr(b, a);
    benchmark::DoNotOptimize(r.value_db);
  }
  state.SetItemsProcessed(state.iterations() * 48000);
}
BENCHMARK(BM_SiSnr)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
