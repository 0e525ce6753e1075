// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_MASK_HPP
#define BEAMSEP_MASK_HPP

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "beamsep/common.hpp"
#include "beamsep/spatial.hpp"
#include "beamsep/stft.hpp"

namespace beamsep {

// Complex TF mask, shape: T x F
struct ComplexMask {
  size_t num_frames = 0;
  size_t num_bins = 0;
  std::optional<double> compression_bound;  // K: |Re|,|Im| <= K when set
  std::vector<cplx> values;

  ComplexMask() = default;
  ComplexMask(size_t frames, size_t bins)
      : num_frames(frames), num_bins(bins),
        values(frames * bins, cplx(0.0, 0.0)) {}

  cplx &at(size_t t, size_t f) { return values[t * num_bins + f]; }
  cplx at(size_t t, size_t f) const { return values[t * num_bins + f]; }
};

// Oracle complex ratio mask M = S / X on the reference channel, real and
// imaginary parts clipped to [-K, K]; bins with |X| < 1e-10 get M = 0.
// bound <= 0 means unbounded.
ComplexMask oracle_crm(const ComplexSpectrogram &stem_ref,
                       const ComplexSpectrogram &mixture_ref,
                       double bound = 10.0);

// Masked spectrum via the explicit real/imaginary expansion of the complex
// product M * X:
//   Re(Y) = Re(M) Re(X) - Im(M) Im(X)
//   Im(Y) = Im(M) Re(X) + Re(M) Im(X)
ComplexSpectrogram apply_mask(const ComplexMask &mask,
                              const ComplexSpectrogram &spec_ref);

// Threshold the angle feature into complementary binary masks:
// target = 1 where AF >= tau, noise = 1 - target. tau must lie in [-1, 1].
std::pair<ComplexMask, ComplexMask> af_heuristic_masks(
    const FeatureMatrix &af, double threshold);

}  // namespace beamsep

#endif  // BEAMSEP_MASK_HPP
