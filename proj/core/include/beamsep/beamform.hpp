// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_BEAMFORM_HPP
#define BEAMSEP_BEAMFORM_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "beamsep/common.hpp"
#include "beamsep/mask.hpp"
#include "beamsep/spatial.hpp"
#include "beamsep/stft.hpp"

namespace beamsep {

// Per-frequency channel covariance matrices, shape: F x C x C.
// Each matrix is Hermitian (symmetrized after estimation).
struct PsdSet {
  size_t num_bins = 0;
  size_t num_channels = 0;
  std::vector<cplx> matrices;           // F x C x C row major
  std::vector<uint8_t> degenerate_bin;  // 1 where the mask energy was floored

  PsdSet() = default;
  PsdSet(size_t bins, size_t channels)
      : num_bins(bins), num_channels(channels),
        matrices(bins * channels * channels, cplx(0.0, 0.0)),
        degenerate_bin(bins, 0) {}

  cplx &at(size_t f, size_t r, size_t c) {
    return matrices[(f * num_channels + r) * num_channels + c];
  }
  cplx at(size_t f, size_t r, size_t c) const {
    return matrices[(f * num_channels + r) * num_channels + c];
  }
  cplx *matrix(size_t f) {
    return matrices.data() + f * num_channels * num_channels;
  }
  const cplx *matrix(size_t f) const {
    return matrices.data() + f * num_channels * num_channels;
  }
};

enum class WeightKind { kTimeInvariant, kTimeVariant };

// Channel weights: W(f) (F x C) or W_r(t,f) (T x F x C).
struct BeamformerWeights {
  WeightKind kind = WeightKind::kTimeInvariant;
  size_t num_frames = 0;  // 0 for time-invariant
  size_t num_bins = 0;
  size_t num_channels = 0;
  size_t reference_index = 0;
  std::vector<cplx> values;

  cplx &ti_at(size_t f, size_t c) { return values[f * num_channels + c]; }
  cplx ti_at(size_t f, size_t c) const { return values[f * num_channels + c]; }
  cplx &tv_at(size_t t, size_t f, size_t c) {
    return values[(t * num_bins + f) * num_channels + c];
  }
  cplx tv_at(size_t t, size_t f, size_t c) const {
    return values[(t * num_bins + f) * num_channels + c];
  }
};

// Mask-weighted PSD estimate:
//   Phi(f) = sum_t |M(t,f)|^2 X(:,t,f) X(:,t,f)^H / sum_t |M(t,f)|^2
// The denominator is the scalar mask energy; bins where it falls below
// 1e-10 are floored and flagged in degenerate_bin.
PsdSet estimate_psd(const ComplexSpectrogram &spec, const ComplexMask &mask);

// W(f) = Phi_n^{-1} G / (G^H Phi_n^{-1} G), with diagonal loading
// Phi_n + eps * (trace/C) * I before the solve.
BeamformerWeights mvdr_from_steering(const PsdSet &psd_noise,
                                     const SteeringVector &steering,
                                     double loading = 1e-6);

// W(f) = (Phi_n^{-1} Phi_y / trace(Phi_n^{-1} Phi_y)) U_r.
BeamformerWeights mvdr_from_psd(const PsdSet &psd_speech,
                                const PsdSet &psd_noise, size_t reference,
                                double loading = 1e-6);

// W(f) = G(f) / C
BeamformerWeights delay_and_sum(const SteeringVector &steering);

// Time-invariant: Y(t,f) = W(f)^H X(:,t,f)  (conjugate transpose).
// Time-variant:   Y(t,f) = sum_r W_r(t,f) X_r(t,f)  (plain product, no
// conjugation; the two conventions are kept exactly as they differ).
ComplexSpectrogram apply_weights(const BeamformerWeights &weights,
                                 const ComplexSpectrogram &spec);

// Broadcast time-invariant weights to a time-variant filter bank whose
// plain-product application reproduces the W^H X output (entries are
// conjugated during the broadcast).
BeamformerWeights broadcast_time_variant(const BeamformerWeights &ti,
                                         size_t num_frames);

struct ResidualDiagnostics {
  std::vector<double> distortion_power;  // per f, mean over frames
  std::vector<double> noise_power;       // per f, mean over frames
};

// distortion via (U_r - W)^H Y, residual noise via W^H N
ResidualDiagnostics residual_diagnostics(const BeamformerWeights &weights,
                                         const ComplexSpectrogram &target_stems,
                                         const ComplexSpectrogram &noise_stems);

}  // namespace beamsep

#endif  // BEAMSEP_BEAMFORM_HPP
