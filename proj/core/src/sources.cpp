// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/sources.hpp"

#include <algorithm>
#include <cmath>

namespace beamsep {

namespace {
constexpr double kPi = 3.14159265358979323846;

// crude single-resonance weighting used to shape harmonic amplitudes
double resonance(double f_hz, double center, double bw) {
  const double d = (f_hz - center) / bw;
  return 1.0 / (1.0 + d * d);
}
}  // namespace

MultiChannelWaveform synth_speech_like(Rng &rng, double duration_s,
                                       int sample_rate) {
  const size_t total =
      static_cast<size_t>(duration_s * static_cast<double>(sample_rate));
  std::vector<double> out(total, 0.0);

  size_t pos = 0;
  while (pos < total) {
    // pause between syllables
    if (rng.uniform() < 0.25) {
      pos += static_cast<size_t>(rng.uniform(0.05, 0.15) * sample_rate);
      continue;
    }

    const size_t syl_len = std::min(
        total - pos,
        static_cast<size_t>(rng.uniform(0.12, 0.28) * sample_rate));
    if (syl_len < 32) break;

    const double amp = rng.uniform(0.3, 1.0);
    const bool voiced = rng.uniform() < 0.75;

    // per-syllable formant-ish resonances
    const double f1 = rng.uniform(350.0, 900.0);
    const double f2 = rng.uniform(1100.0, 2300.0);
    const double f3 = rng.uniform(2400.0, 3400.0);

    if (voiced) {
      const double f0_start = rng.uniform(85.0, 255.0);
      const double f0_end = f0_start * rng.uniform(0.85, 1.2);
      const int num_harm =
          static_cast<int>(4000.0 / std::max(f0_start, f0_end));
      std::vector<double> harm_amp(static_cast<size_t>(num_harm) + 1, 0.0);
      std::vector<double> harm_phase(static_cast<size_t>(num_harm) + 1, 0.0);
      for (int h = 1; h <= num_harm; ++h) {
        const double fh = 0.5 * (f0_start + f0_end) * h;
        harm_amp[static_cast<size_t>(h)] =
            (1.0 / h) * (0.25 + resonance(fh, f1, 180.0) +
                         0.8 * resonance(fh, f2, 260.0) +
                         0.5 * resonance(fh, f3, 320.0));
        harm_phase[static_cast<size_t>(h)] = rng.uniform(0.0, 2.0 * kPi);
      }
      double phase = rng.uniform(0.0, 2.0 * kPi);
      for (size_t n = 0; n < syl_len; ++n) {
        const double frac = static_cast<double>(n) / syl_len;
        const double f0 = f0_start + (f0_end - f0_start) * frac;
        phase += 2.0 * kPi * f0 / sample_rate;
        const double env = std::sin(kPi * frac);  // raised attack/decay
        double v = 0.0;
        for (int h = 1; h <= num_harm; ++h)
          v += harm_amp[static_cast<size_t>(h)] *
               std::sin(h * phase + harm_phase[static_cast<size_t>(h)]);
        out[pos + n] += amp * env * v;
      }
    } else {
      // unvoiced burst: noise through a one-pole highpass, band tilt by f2
      double prev = 0.0;
      for (size_t n = 0; n < syl_len; ++n) {
        const double frac = static_cast<double>(n) / syl_len;
        const double env = std::sin(kPi * frac);
        const double white = rng.normal();
        const double hp = white - 0.92 * prev;
        prev = white;
        out[pos + n] += amp * 0.5 * env * hp;
      }
    }
    pos += syl_len;
  }

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double scale = 0.5 / peak;
    for (double &v : out) v *= scale;
  }
  return MultiChannelWaveform::from_mono(std::move(out), sample_rate);
}

}  // namespace beamsep
