// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/stft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace beamsep {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW plan creation is not thread safe; execution on distinct arrays is.
// Plans are created with FFTW_ESTIMATE so the transform algorithm (and
// therefore the exact rounding) does not depend on runtime measurement.
std::mutex &plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan r2c_plan(size_t n) {
  static std::map<size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> in(n, 0.0);
  std::vector<fftw_complex> out(n / 2 + 1);
  fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                     out.data(), FFTW_ESTIMATE);
  cache[n] = p;
  return p;
}

fftw_plan c2r_plan(size_t n) {
  static std::map<size_t, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<fftw_complex> in(n / 2 + 1);
  std::vector<double> out(n, 0.0);
  fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.data(),
                                     out.data(), FFTW_ESTIMATE);
  cache[n] = p;
  return p;
}

}  // namespace

void rfft(const double *in, cplx *out, size_t n) {
  fftw_plan plan = r2c_plan(n);
  // new-array execution keeps the cached plan reusable across threads
  std::vector<double> buf_in(in, in + n);
  std::vector<fftw_complex> buf_out(n / 2 + 1);
  fftw_execute_dft_r2c(plan, buf_in.data(), buf_out.data());
  for (size_t k = 0; k < n / 2 + 1; ++k)
    out[k] = cplx(buf_out[k][0], buf_out[k][1]);
}

void irfft(const cplx *in, double *out, size_t n) {
  fftw_plan plan = c2r_plan(n);
  std::vector<fftw_complex> buf_in(n / 2 + 1);
  for (size_t k = 0; k < n / 2 + 1; ++k) {
    buf_in[k][0] = in[k].real();
    buf_in[k][1] = in[k].imag();
  }
  std::vector<double> buf_out(n);
  fftw_execute_dft_c2r(plan, buf_in.data(), buf_out.data());
  const double scale = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) out[i] = buf_out[i] * scale;
}

std::vector<double> StftConfig::analysis_window() const {
  std::vector<double> w(window_length);
  switch (window) {
    case WindowKind::kHann:
      // periodic Hann
      for (size_t n = 0; n < window_length; ++n)
        w[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(n) /
                                    static_cast<double>(window_length));
      break;
    case WindowKind::kRect:
      std::fill(w.begin(), w.end(), 1.0);
      break;
  }
  return w;
}

void StftConfig::validate() const {
  if (fft_size == 0 || window_length == 0 || hop_length == 0)
    throw ConfigError("stft sizes must be positive");
  if (hop_length > window_length)
    throw ConfigError("hop_length must not exceed window_length");
  if (window_length > fft_size)
    throw ConfigError("window_length must not exceed fft_size");
  // numeric constant-overlap-add check on the analysis window: the shifted
  // window sum must be flat over a full period (wrap-around tiling)
  const std::vector<double> w = analysis_window();
  std::vector<double> acc(window_length, 0.0);
  for (size_t shift = 0; shift < window_length; shift += hop_length)
    for (size_t n = 0; n < window_length; ++n)
      acc[(n + shift) % window_length] += w[n];
  const double lo = *std::min_element(acc.begin(), acc.end());
  const double hi = *std::max_element(acc.begin(), acc.end());
  if (window_length % hop_length != 0 || lo <= 0.0 ||
      (hi - lo) / hi > 1e-6)
    throw ConfigError("window/hop pair violates constant overlap-add");
}

size_t StftConfig::num_frames(size_t length) const {
  const size_t pad = center_padding ? window_length / 2 : 0;
  const size_t padded = length + 2 * pad;
  if (padded < window_length) return 0;
  return 1 + (padded - window_length) / hop_length;
}

ComplexSpectrogram ComplexSpectrogram::channel(size_t c) const {
  ComplexSpectrogram out(1, num_frames, num_bins, sample_rate, config);
  std::copy(data.begin() + c * num_frames * num_bins,
            data.begin() + (c + 1) * num_frames * num_bins, out.data.begin());
  return out;
}

namespace {

// reflect indexing without edge repetition, period 2n-2
size_t reflect_index(long long p, size_t n) {
  if (n == 1) return 0;
  const long long period = 2 * static_cast<long long>(n) - 2;
  long long q = p % period;
  if (q < 0) q += period;
  return static_cast<size_t>(q < static_cast<long long>(n) ? q : period - q);
}

// reflect padding: [pad mirrored prefix] signal [pad mirrored suffix]
std::vector<double> pad_signal(const double *x, size_t n, size_t pad) {
  std::vector<double> out(n + 2 * pad);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = x[reflect_index(static_cast<long long>(i) -
                                 static_cast<long long>(pad),
                             n)];
  return out;
}

}  // namespace

ComplexSpectrogram stft(const MultiChannelWaveform &wave, const StftConfig &cfg) {
  if (wave.num_channels == 0 || wave.num_samples == 0)
    throw DomainError("input too short: empty waveform");
  const size_t pad = cfg.center_padding ? cfg.window_length / 2 : 0;
  if (wave.num_samples + 2 * pad < cfg.window_length)
    throw DomainError("input too short: fewer samples than one window");

  const size_t frames = cfg.num_frames(wave.num_samples);
  const size_t bins = cfg.num_bins();
  ComplexSpectrogram spec(wave.num_channels, frames, bins, wave.sample_rate, cfg);

  const std::vector<double> win = cfg.analysis_window();
  std::vector<double> frame_buf(cfg.fft_size);
  std::vector<cplx> bin_buf(bins);

  for (size_t c = 0; c < wave.num_channels; ++c) {
    const std::vector<double> padded =
        cfg.center_padding
            ? pad_signal(wave.channel(c), wave.num_samples, pad)
            : std::vector<double>(wave.channel(c),
                                  wave.channel(c) + wave.num_samples);
    for (size_t t = 0; t < frames; ++t) {
      const size_t start = t * cfg.hop_length;
      std::fill(frame_buf.begin(), frame_buf.end(), 0.0);
      for (size_t n = 0; n < cfg.window_length; ++n)
        frame_buf[n] = padded[start + n] * win[n];
      rfft(frame_buf.data(), bin_buf.data(), cfg.fft_size);
      std::copy(bin_buf.begin(), bin_buf.end(),
                spec.data.begin() + (c * frames + t) * bins);
    }
  }
  return spec;
}

MultiChannelWaveform istft(const ComplexSpectrogram &spec, const StftConfig &cfg,
                           size_t length) {
  if (spec.num_bins != cfg.num_bins())
    throw ShapeError("spectrogram bins do not match config");
  const size_t pad = cfg.center_padding ? cfg.window_length / 2 : 0;
  const size_t total = (spec.num_frames - 1) * cfg.hop_length + cfg.window_length;

  const std::vector<double> win = cfg.analysis_window();
  MultiChannelWaveform out(spec.num_channels, length, spec.sample_rate);

  std::vector<double> acc(total);
  std::vector<double> den(total);
  std::vector<double> time_buf(cfg.fft_size);

  for (size_t c = 0; c < spec.num_channels; ++c) {
    std::fill(acc.begin(), acc.end(), 0.0);
    std::fill(den.begin(), den.end(), 0.0);
    for (size_t t = 0; t < spec.num_frames; ++t) {
      irfft(spec.frame(c, t), time_buf.data(), cfg.fft_size);
      const size_t start = t * cfg.hop_length;
      for (size_t n = 0; n < cfg.window_length; ++n) {
        acc[start + n] += time_buf[n] * win[n];
        den[start + n] += win[n] * win[n];
      }
    }
    for (size_t n = 0; n < total; ++n)
      acc[n] /= std::max(den[n], 1e-12);
    for (size_t n = 0; n < length; ++n) {
      const size_t src = n + pad;
      out.at(c, n) = src < total ? acc[src] : 0.0;
    }
  }
  return out;
}

std::vector<double> fft_convolve(const std::vector<double> &a,
                                 const std::vector<double> &b) {
  if (a.empty() || b.empty()) return {};
  const size_t out_len = a.size() + b.size() - 1;
  size_t n = 1;
  while (n < out_len) n <<= 1;
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<cplx> fa(n / 2 + 1), fb(n / 2 + 1);
  rfft(pa.data(), fa.data(), n);
  rfft(pb.data(), fb.data(), n);
  for (size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  std::vector<double> full(n);
  irfft(fa.data(), full.data(), n);
  full.resize(out_len);
  return full;
}

}  // namespace beamsep
