// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_GEOMETRY_HPP
#define BEAMSEP_GEOMETRY_HPP

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "beamsep/common.hpp"

namespace beamsep {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3 &a, const Vec3 &b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3 &a, const Vec3 &b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3 &v) {
  return {s * v[0], s * v[1], s * v[2]};
}
double dot(const Vec3 &a, const Vec3 &b);
double norm(const Vec3 &v);

// Microphone layout. Positions are relative to the array centroid, meters.
struct ArrayGeometry {
  std::vector<Vec3> mic_positions_relative;
  size_t reference_index = 0;

  size_t num_channels() const { return mic_positions_relative.size(); }

  // all mics on one line (within tol); throws DomainError otherwise
  void check_linear(double tol = 1e-9) const;

  // unit vector of the array axis (first mic towards last mic)
  Vec3 axis() const;

  // signed offset of mic i from the reference mic along the axis, meters
  double offset_from_reference(size_t i) const;

  void validate() const;
};

// 15-mic symmetric linear array: inter-mic gaps, in cm, of
// [8 8 8 4 4 2 2 | 2 2 4 4 8 8 8] (dense toward the center), 72 cm span,
// laid out along x and centered on the centroid.
ArrayGeometry default_array();

using PairList = std::vector<std::pair<size_t, size_t>>;

// the 9 pairs used for IPD/AF, multi-scale spacings, 0-based
PairList default_pairs();

void validate_pairs(const PairList &pairs, size_t num_channels);

}  // namespace beamsep

#endif  // BEAMSEP_GEOMETRY_HPP
