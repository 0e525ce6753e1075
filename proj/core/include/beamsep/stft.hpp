// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_STFT_HPP
#define BEAMSEP_STFT_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "beamsep/common.hpp"
#include "beamsep/waveform.hpp"

namespace beamsep {

enum class WindowKind { kHann, kRect };  // periodic Hann / rectangular

// Analysis/synthesis configuration. The constructor validates shapes and
// checks the constant-overlap-add property of the analysis window
// numerically, so istft never has to fail on that account.
struct StftConfig {
  size_t fft_size = 512;
  size_t window_length = 512;  // 32 ms at 16 kHz
  size_t hop_length = 256;     // 16 ms at 16 kHz
  WindowKind window = WindowKind::kHann;
  bool center_padding = true;

  StftConfig() { validate(); }
  StftConfig(size_t fft, size_t win, size_t hop, bool center = true)
      : fft_size(fft), window_length(win), hop_length(hop),
        center_padding(center) {
    validate();
  }

  size_t num_bins() const { return fft_size / 2 + 1; }

  // frames for an input of `length` samples under the framing rule:
  // reflect pad by window_length/2 on both sides when center_padding,
  // then 1 + floor((padded - window) / hop)
  size_t num_frames(size_t length) const;

  std::vector<double> analysis_window() const;

  void validate() const;
};

// One-sided complex STFT tensor. data is row major, shape: C x T x F
struct ComplexSpectrogram {
  size_t num_channels = 0;
  size_t num_frames = 0;
  size_t num_bins = 0;
  int sample_rate = 16000;
  StftConfig config;
  std::vector<cplx> data;

  ComplexSpectrogram() = default;
  ComplexSpectrogram(size_t channels, size_t frames, size_t bins, int rate,
                     const StftConfig &cfg)
      : num_channels(channels), num_frames(frames), num_bins(bins),
        sample_rate(rate), config(cfg),
        data(channels * frames * bins, cplx(0.0, 0.0)) {}

  cplx &at(size_t c, size_t t, size_t f) {
    return data[(c * num_frames + t) * num_bins + f];
  }
  cplx at(size_t c, size_t t, size_t f) const {
    return data[(c * num_frames + t) * num_bins + f];
  }
  const cplx *frame(size_t c, size_t t) const {
    return data.data() + (c * num_frames + t) * num_bins;
  }

  // view of channel c as a 1-channel spectrogram (copy)
  ComplexSpectrogram channel(size_t c) const;
};

ComplexSpectrogram stft(const MultiChannelWaveform &wave, const StftConfig &cfg);

// WOLA synthesis with pointwise squared-window normalization (1e-12 floor);
// output trimmed or zero padded to `length` samples.
MultiChannelWaveform istft(const ComplexSpectrogram &spec, const StftConfig &cfg,
                           size_t length);

// Deterministic FFT helpers backed by cached plans (FFTW, FFTW_ESTIMATE).
// in: n real samples; out: n/2+1 bins.
void rfft(const double *in, cplx *out, size_t n);
// inverse of rfft, scaled by 1/n so irfft(rfft(x)) == x
void irfft(const cplx *in, double *out, size_t n);

// Linear convolution via FFT, output length a.size() + b.size() - 1.
std::vector<double> fft_convolve(const std::vector<double> &a,
                                 const std::vector<double> &b);

}  // namespace beamsep

#endif  // BEAMSEP_STFT_HPP
