// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/mask.hpp"

#include <algorithm>
#include <cmath>

namespace beamsep {

ComplexMask oracle_crm(const ComplexSpectrogram &stem_ref,
                       const ComplexSpectrogram &mixture_ref, double bound) {
  if (stem_ref.num_channels != 1 || mixture_ref.num_channels != 1)
    throw ShapeError("oracle_crm expects single-channel spectrograms");
  if (stem_ref.num_frames != mixture_ref.num_frames ||
      stem_ref.num_bins != mixture_ref.num_bins)
    throw ShapeError("oracle_crm shape mismatch");

  const bool clip = bound > 0.0;
  ComplexMask mask(stem_ref.num_frames, stem_ref.num_bins);
  if (clip) mask.compression_bound = bound;

  for (size_t t = 0; t < mask.num_frames; ++t)
    for (size_t f = 0; f < mask.num_bins; ++f) {
      const cplx x = mixture_ref.at(0, t, f);
      if (std::abs(x) < 1e-10) continue;  // leave M = 0
      cplx m = stem_ref.at(0, t, f) / x;
      if (clip)
        m = cplx(std::clamp(m.real(), -bound, bound),
                 std::clamp(m.imag(), -bound, bound));
      mask.at(t, f) = m;
    }
  return mask;
}

ComplexSpectrogram apply_mask(const ComplexMask &mask,
                              const ComplexSpectrogram &spec_ref) {
  if (spec_ref.num_channels != 1)
    throw ShapeError("apply_mask expects a single-channel spectrogram");
  if (mask.num_frames != spec_ref.num_frames ||
      mask.num_bins != spec_ref.num_bins)
    throw ShapeError("mask/spectrogram shape mismatch");

  ComplexSpectrogram out(1, spec_ref.num_frames, spec_ref.num_bins,
                         spec_ref.sample_rate, spec_ref.config);
  for (size_t t = 0; t < mask.num_frames; ++t)
    for (size_t f = 0; f < mask.num_bins; ++f) {
      const cplx m = mask.at(t, f);
      const cplx x = spec_ref.at(0, t, f);
      const double re = m.real() * x.real() - m.imag() * x.imag();
      const double im = m.imag() * x.real() + m.real() * x.imag();
      out.at(0, t, f) = cplx(re, im);
    }
  return out;
}

std::pair<ComplexMask, ComplexMask> af_heuristic_masks(const FeatureMatrix &af,
                                                       double threshold) {
  if (threshold < -1.0 || threshold > 1.0)
    throw DomainError("af threshold must be in [-1, 1]");
  if (af.kind != FeatureKind::kAngleFeature || af.num_pairs != 1)
    throw ShapeError("af_heuristic_masks expects an angle-feature matrix");

  ComplexMask target(af.num_frames, af.num_bins);
  ComplexMask noise(af.num_frames, af.num_bins);
  for (size_t t = 0; t < af.num_frames; ++t)
    for (size_t f = 0; f < af.num_bins; ++f) {
      const bool is_target = af.at(0, t, f) >= threshold;
      target.at(t, f) = cplx(is_target ? 1.0 : 0.0, 0.0);
      noise.at(t, f) = cplx(is_target ? 0.0 : 1.0, 0.0);
    }
  return {std::move(target), std::move(noise)};
}

}  // namespace beamsep
