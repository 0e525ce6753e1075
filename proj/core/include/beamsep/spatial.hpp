// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_SPATIAL_HPP
#define BEAMSEP_SPATIAL_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "beamsep/common.hpp"
#include "beamsep/geometry.hpp"
#include "beamsep/stft.hpp"

namespace beamsep {

// Far-field steering vector, shape: C x F.
// values[i][f] = exp(-j 2 pi f_hz d_i cos(theta) / c) with d_i the signed
// offset of mic i from the reference mic along the array axis.
struct SteeringVector {
  size_t num_channels = 0;
  size_t num_bins = 0;
  double doa_deg = 0.0;
  std::vector<cplx> values;  // C x F row major

  cplx &at(size_t c, size_t f) { return values[c * num_bins + f]; }
  cplx at(size_t c, size_t f) const { return values[c * num_bins + f]; }
};

enum class FeatureKind { kIpd, kAngleFeature };

// IPD: P x T x F, values wrapped to (-pi, pi].  AF: T x F, values in [-1, 1].
struct FeatureMatrix {
  FeatureKind kind = FeatureKind::kIpd;
  size_t num_pairs = 0;  // 1 for AF
  size_t num_frames = 0;
  size_t num_bins = 0;
  std::vector<double> values;  // P x T x F row major

  double &at(size_t p, size_t t, size_t f) {
    return values[(p * num_frames + t) * num_bins + f];
  }
  double at(size_t p, size_t t, size_t f) const {
    return values[(p * num_frames + t) * num_bins + f];
  }
};

// per-bin physical frequency f = bin * sample_rate / fft_size; DOA in
// [0, 180] degrees measured from the array axis; reference entry == 1
SteeringVector steering_vector(const ArrayGeometry &geometry, double doa_deg,
                               const StftConfig &cfg, int sample_rate,
                               double speed_of_sound = 343.0);

// IPD(i,j) = angle(X_i / X_j), computed as angle(X_i * conj(X_j)) so
// vanishing denominators produce 0 instead of NaN
FeatureMatrix ipd(const ComplexSpectrogram &spec, const PairList &pairs);

// Angle feature: per pair the normalized 2-D real inner product between
// the steering ratio G_j/G_i and the signal ratio X_j/X_i (equivalently
// cos(IPD(i,j) + angle(G_j/G_i))), averaged over pairs. A zero-magnitude
// signal ratio contributes 0 for that pair.
FeatureMatrix angle_feature(const ComplexSpectrogram &spec,
                            const SteeringVector &steering,
                            const PairList &pairs);

}  // namespace beamsep

#endif  // BEAMSEP_SPATIAL_HPP
