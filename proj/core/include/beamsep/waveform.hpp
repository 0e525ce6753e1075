// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_WAVEFORM_HPP
#define BEAMSEP_WAVEFORM_HPP

#include <cstddef>
#include <vector>

#include "beamsep/common.hpp"

namespace beamsep {

// R-channel time-domain signal. data is row major, shape: R x N
struct MultiChannelWaveform {
  size_t num_channels = 0;
  size_t num_samples = 0;
  int sample_rate = 16000;
  std::vector<double> data;

  MultiChannelWaveform() = default;
  MultiChannelWaveform(size_t channels, size_t samples, int rate)
      : num_channels(channels),
        num_samples(samples),
        sample_rate(rate),
        data(channels * samples, 0.0) {
    if (rate <= 0) throw DomainError("sample_rate must be positive");
  }

  static MultiChannelWaveform from_mono(std::vector<double> samples, int rate) {
    MultiChannelWaveform w;
    w.num_channels = 1;
    w.num_samples = samples.size();
    w.sample_rate = rate;
    w.data = std::move(samples);
    if (rate <= 0) throw DomainError("sample_rate must be positive");
    return w;
  }

  double *channel(size_t c) { return data.data() + c * num_samples; }
  const double *channel(size_t c) const { return data.data() + c * num_samples; }

  double &at(size_t c, size_t n) { return data[c * num_samples + n]; }
  double at(size_t c, size_t n) const { return data[c * num_samples + n]; }
};

}  // namespace beamsep

#endif  // BEAMSEP_WAVEFORM_HPP
