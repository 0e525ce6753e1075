// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/beamform.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace beamsep {

namespace {

using EigenMat =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EigenVec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;

EigenMat load_matrix(const PsdSet &psd, size_t f) {
  const size_t c = psd.num_channels;
  EigenMat m(c, c);
  for (size_t r = 0; r < c; ++r)
    for (size_t k = 0; k < c; ++k) m(r, k) = psd.at(f, r, k);
  return m;
}

// Hermitian solve A X = B with diagonal loading already applied:
// LLT first, LDLT on indefiniteness, pseudo-inverse as the last resort.
EigenMat hermitian_solve(const EigenMat &a, const EigenMat &b, size_t f) {
  Eigen::LLT<EigenMat> llt(a);
  if (llt.info() == Eigen::Success) return llt.solve(b);
  Eigen::LDLT<EigenMat> ldlt(a);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive())
    return ldlt.solve(b);
  Eigen::CompleteOrthogonalDecomposition<EigenMat> cod(a);
  if (cod.rank() == 0)
    throw DomainError("noise PSD singular after loading at bin " +
                      std::to_string(f));
  return cod.solve(b);
}

EigenMat loaded(const EigenMat &phi, double eps) {
  const auto c = phi.rows();
  double tr = 0.0;
  for (Eigen::Index i = 0; i < c; ++i) tr += phi(i, i).real();
  EigenMat out = phi;
  const double shift = eps * (tr / static_cast<double>(c));
  for (Eigen::Index i = 0; i < c; ++i) out(i, i) += cplx(shift, 0.0);
  return out;
}

}  // namespace

PsdSet estimate_psd(const ComplexSpectrogram &spec, const ComplexMask &mask) {
  if (mask.num_frames != spec.num_frames || mask.num_bins != spec.num_bins)
    throw ShapeError("mask shape does not match spectrogram");
  const size_t C = spec.num_channels;
  const size_t T = spec.num_frames;
  const size_t F = spec.num_bins;

  PsdSet psd(F, C);
  std::vector<cplx> x(C);
  for (size_t f = 0; f < F; ++f) {
    double den = 0.0;
    cplx *phi = psd.matrix(f);
    for (size_t t = 0; t < T; ++t) {
      const cplx m = mask.at(t, f);
      const double w = std::norm(m);  // |M|^2
      if (w == 0.0) continue;
      den += w;
      for (size_t r = 0; r < C; ++r) x[r] = spec.at(r, t, f);
      for (size_t r = 0; r < C; ++r)
        for (size_t c = 0; c < C; ++c)
          phi[r * C + c] += w * x[r] * std::conj(x[c]);
    }
    if (den < 1e-10) {
      den = 1e-10;
      psd.degenerate_bin[f] = 1;
    }
    const double inv = 1.0 / den;
    for (size_t i = 0; i < C * C; ++i) phi[i] *= inv;
    // Hermitian symmetrization
    for (size_t r = 0; r < C; ++r) {
      phi[r * C + r] = cplx(phi[r * C + r].real(), 0.0);
      for (size_t c = r + 1; c < C; ++c) {
        const cplx avg = 0.5 * (phi[r * C + c] + std::conj(phi[c * C + r]));
        phi[r * C + c] = avg;
        phi[c * C + r] = std::conj(avg);
      }
    }
  }
  return psd;
}

BeamformerWeights mvdr_from_steering(const PsdSet &psd_noise,
                                     const SteeringVector &steering,
                                     double loading) {
  if (psd_noise.num_channels != steering.num_channels)
    throw ShapeError("psd/steering channel mismatch");
  if (psd_noise.num_bins != steering.num_bins)
    throw ShapeError("psd/steering bin mismatch");
  const size_t C = psd_noise.num_channels;
  const size_t F = psd_noise.num_bins;

  BeamformerWeights w;
  w.kind = WeightKind::kTimeInvariant;
  w.num_bins = F;
  w.num_channels = C;
  w.values.resize(F * C);

  for (size_t f = 0; f < F; ++f) {
    const EigenMat a = loaded(load_matrix(psd_noise, f), loading);
    EigenVec g(C);
    for (size_t c = 0; c < C; ++c) g(static_cast<Eigen::Index>(c)) = steering.at(c, f);
    const EigenVec x = hermitian_solve(a, g, f);
    const cplx denom = g.dot(x);  // g^H x, Eigen dot conjugates the left arg
    if (std::abs(denom) < 1e-300)
      throw DomainError("mvdr denominator vanished at bin " + std::to_string(f));
    for (size_t c = 0; c < C; ++c)
      w.ti_at(f, c) = x(static_cast<Eigen::Index>(c)) / denom;
  }
  return w;
}

BeamformerWeights mvdr_from_psd(const PsdSet &psd_speech,
                                const PsdSet &psd_noise, size_t reference,
                                double loading) {
  if (psd_speech.num_channels != psd_noise.num_channels ||
      psd_speech.num_bins != psd_noise.num_bins)
    throw ShapeError("speech/noise PSD shape mismatch");
  const size_t C = psd_noise.num_channels;
  const size_t F = psd_noise.num_bins;
  if (reference >= C) throw ShapeError("reference channel out of range");

  BeamformerWeights w;
  w.kind = WeightKind::kTimeInvariant;
  w.num_bins = F;
  w.num_channels = C;
  w.reference_index = reference;
  w.values.resize(F * C);

  for (size_t f = 0; f < F; ++f) {
    const EigenMat a = loaded(load_matrix(psd_noise, f), loading);
    const EigenMat phi_y = load_matrix(psd_speech, f);
    const EigenMat numer = hermitian_solve(a, phi_y, f);  // Phi_n^{-1} Phi_y
    const cplx tr = numer.trace();
    if (std::abs(tr) < 1e-12)
      throw DomainError("degenerate speech PSD at bin " + std::to_string(f));
    for (size_t c = 0; c < C; ++c)
      w.ti_at(f, c) =
          numer(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(reference)) / tr;
  }
  return w;
}

BeamformerWeights delay_and_sum(const SteeringVector &steering) {
  const size_t C = steering.num_channels;
  const size_t F = steering.num_bins;
  BeamformerWeights w;
  w.kind = WeightKind::kTimeInvariant;
  w.num_bins = F;
  w.num_channels = C;
  w.values.resize(F * C);
  const double inv = 1.0 / static_cast<double>(C);
  for (size_t f = 0; f < F; ++f)
    for (size_t c = 0; c < C; ++c) w.ti_at(f, c) = steering.at(c, f) * inv;
  return w;
}

ComplexSpectrogram apply_weights(const BeamformerWeights &weights,
                                 const ComplexSpectrogram &spec) {
  if (weights.num_channels != spec.num_channels)
    throw ShapeError("weights channel count does not match spectrogram");
  if (weights.num_bins != spec.num_bins)
    throw ShapeError("weights bins do not match spectrogram");
  if (weights.kind == WeightKind::kTimeVariant &&
      weights.num_frames != spec.num_frames)
    throw ShapeError("time-variant weights frame count mismatch");

  ComplexSpectrogram out(1, spec.num_frames, spec.num_bins, spec.sample_rate,
                         spec.config);
  for (size_t t = 0; t < spec.num_frames; ++t)
    for (size_t f = 0; f < spec.num_bins; ++f) {
      cplx acc(0.0, 0.0);
      if (weights.kind == WeightKind::kTimeInvariant) {
        for (size_t c = 0; c < spec.num_channels; ++c)
          acc += std::conj(weights.ti_at(f, c)) * spec.at(c, t, f);
      } else {
        for (size_t c = 0; c < spec.num_channels; ++c)
          acc += weights.tv_at(t, f, c) * spec.at(c, t, f);
      }
      out.at(0, t, f) = acc;
    }
  return out;
}

BeamformerWeights broadcast_time_variant(const BeamformerWeights &ti,
                                         size_t num_frames) {
  if (ti.kind != WeightKind::kTimeInvariant)
    throw ShapeError("broadcast expects time-invariant weights");
  BeamformerWeights tv;
  tv.kind = WeightKind::kTimeVariant;
  tv.num_frames = num_frames;
  tv.num_bins = ti.num_bins;
  tv.num_channels = ti.num_channels;
  tv.reference_index = ti.reference_index;
  tv.values.resize(num_frames * ti.num_bins * ti.num_channels);
  for (size_t t = 0; t < num_frames; ++t)
    for (size_t f = 0; f < ti.num_bins; ++f)
      for (size_t c = 0; c < ti.num_channels; ++c)
        tv.tv_at(t, f, c) = std::conj(ti.ti_at(f, c));
  return tv;
}

ResidualDiagnostics residual_diagnostics(const BeamformerWeights &weights,
                                         const ComplexSpectrogram &target_stems,
                                         const ComplexSpectrogram &noise_stems) {
  if (weights.kind != WeightKind::kTimeInvariant)
    throw ShapeError("residual diagnostics expect time-invariant weights");
  if (target_stems.num_channels != weights.num_channels ||
      noise_stems.num_channels != weights.num_channels)
    throw ShapeError("stem channel mismatch");
  const size_t C = weights.num_channels;
  const size_t F = weights.num_bins;
  const size_t T = target_stems.num_frames;
  const size_t r = weights.reference_index;

  ResidualDiagnostics diag;
  diag.distortion_power.assign(F, 0.0);
  diag.noise_power.assign(F, 0.0);

  for (size_t f = 0; f < F; ++f) {
    double pd = 0.0, pn = 0.0;
    for (size_t t = 0; t < T; ++t) {
      cplx d(0.0, 0.0), n(0.0, 0.0);
      for (size_t c = 0; c < C; ++c) {
        const cplx u = c == r ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        d += std::conj(u - weights.ti_at(f, c)) * target_stems.at(c, t, f);
        n += std::conj(weights.ti_at(f, c)) * noise_stems.at(c, t, f);
      }
      pd += std::norm(d);
      pn += std::norm(n);
    }
    const double inv = T > 0 ? 1.0 / static_cast<double>(T) : 0.0;
    diag.distortion_power[f] = pd * inv;
    diag.noise_power[f] = pn * inv;
  }
  return diag;
}

}  // namespace beamsep
