// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/spatial.hpp"

#include <cmath>

namespace beamsep {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SteeringVector steering_vector(const ArrayGeometry &geometry, double doa_deg,
                               const StftConfig &cfg, int sample_rate,
                               double speed_of_sound) {
  if (doa_deg < 0.0 || doa_deg > 180.0)
    throw DomainError("doa_deg must be in [0, 180]");
  if (speed_of_sound <= 0.0) throw DomainError("speed of sound must be positive");
  geometry.validate();
  geometry.check_linear();

  const size_t bins = cfg.num_bins();
  const size_t channels = geometry.num_channels();
  const double cos_theta = std::cos(doa_deg * kPi / 180.0);

  SteeringVector sv;
  sv.num_channels = channels;
  sv.num_bins = bins;
  sv.doa_deg = doa_deg;
  sv.values.resize(channels * bins);

  for (size_t i = 0; i < channels; ++i) {
    const double d = geometry.offset_from_reference(i);
    for (size_t f = 0; f < bins; ++f) {
      const double f_hz = static_cast<double>(f) *
                          static_cast<double>(sample_rate) /
                          static_cast<double>(cfg.fft_size);
      const double phase = -2.0 * kPi * f_hz * d * cos_theta / speed_of_sound;
      sv.at(i, f) = cplx(std::cos(phase), std::sin(phase));
    }
  }
  return sv;
}

FeatureMatrix ipd(const ComplexSpectrogram &spec, const PairList &pairs) {
  validate_pairs(pairs, spec.num_channels);

  FeatureMatrix out;
  out.kind = FeatureKind::kIpd;
  out.num_pairs = pairs.size();
  out.num_frames = spec.num_frames;
  out.num_bins = spec.num_bins;
  out.values.resize(pairs.size() * spec.num_frames * spec.num_bins);

  for (size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    for (size_t t = 0; t < spec.num_frames; ++t)
      for (size_t f = 0; f < spec.num_bins; ++f) {
        const cplx prod = spec.at(i, t, f) * std::conj(spec.at(j, t, f));
        // arg(0) == 0, so vanishing bins yield 0 rather than NaN
        out.at(p, t, f) = std::arg(prod);
      }
  }
  return out;
}

FeatureMatrix angle_feature(const ComplexSpectrogram &spec,
                            const SteeringVector &steering,
                            const PairList &pairs) {
  validate_pairs(pairs, spec.num_channels);
  if (steering.num_channels != spec.num_channels)
    throw ShapeError("steering channel count does not match spectrogram");
  if (steering.num_bins != spec.num_bins)
    throw ShapeError("steering bins do not match spectrogram");

  FeatureMatrix out;
  out.kind = FeatureKind::kAngleFeature;
  out.num_pairs = 1;
  out.num_frames = spec.num_frames;
  out.num_bins = spec.num_bins;
  out.values.assign(spec.num_frames * spec.num_bins, 0.0);

  const double inv_pairs = 1.0 / static_cast<double>(pairs.size());

  for (const auto &[i, j] : pairs) {
    for (size_t t = 0; t < spec.num_frames; ++t)
      for (size_t f = 0; f < spec.num_bins; ++f) {
        // steering ratio G_j/G_i (unit modulus), signal ratio direction
        // X_j/X_i taken as X_j * conj(X_i) (same direction, no division)
        const cplx a = steering.at(j, f) * std::conj(steering.at(i, f));
        const cplx b = spec.at(j, t, f) * std::conj(spec.at(i, t, f));
        const double na = std::abs(a);
        const double nb = std::abs(b);
        if (nb < 1e-300) continue;  // zero ratio: this pair contributes 0
        // Re(a)Re(b) + Im(a)Im(b) over the product of 2-D norms
        const double inner = a.real() * b.real() + a.imag() * b.imag();
        out.at(0, t, f) += inv_pairs * inner / (na * nb);
      }
  }
  return out;
}

}  // namespace beamsep
