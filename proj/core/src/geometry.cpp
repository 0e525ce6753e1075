// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/geometry.hpp"

#include <cmath>
#include <set>

namespace beamsep {

double dot(const Vec3 &a, const Vec3 &b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double norm(const Vec3 &v) { return std::sqrt(dot(v, v)); }

void ArrayGeometry::validate() const {
  if (mic_positions_relative.empty())
    throw ConfigError("array geometry has no microphones");
  if (reference_index >= mic_positions_relative.size())
    throw ConfigError("reference_index out of range");
  for (size_t i = 0; i < mic_positions_relative.size(); ++i)
    for (size_t j = i + 1; j < mic_positions_relative.size(); ++j)
      if (norm(mic_positions_relative[i] - mic_positions_relative[j]) < 1e-9)
        throw ConfigError("duplicate microphone positions");
}

Vec3 ArrayGeometry::axis() const {
  const Vec3 d = mic_positions_relative.back() - mic_positions_relative.front();
  const double len = norm(d);
  if (len < 1e-12) throw DomainError("degenerate array axis");
  return (1.0 / len) * d;
}

void ArrayGeometry::check_linear(double tol) const {
  if (mic_positions_relative.size() < 2) return;
  const Vec3 u = axis();
  const Vec3 origin = mic_positions_relative.front();
  for (const Vec3 &p : mic_positions_relative) {
    const Vec3 d = p - origin;
    const double along = dot(d, u);
    const Vec3 residual = d - along * u;
    if (norm(residual) > tol)
      throw DomainError("array geometry is not linear");
  }
}

double ArrayGeometry::offset_from_reference(size_t i) const {
  const Vec3 u = axis();
  return dot(mic_positions_relative[i] -
                 mic_positions_relative[reference_index],
             u);
}

ArrayGeometry default_array() {
  // gaps in cm, outermost to center, mirrored on the right half
  const double half_gaps[] = {8, 8, 8, 4, 4, 2, 2};
  std::vector<double> x(15, 0.0);
  for (int i = 1; i <= 7; ++i) x[i] = x[i - 1] + half_gaps[i - 1] * 0.01;
  for (int i = 8; i < 15; ++i) x[i] = x[i - 1] + half_gaps[14 - i] * 0.01;
  double centroid = 0.0;
  for (double v : x) centroid += v;
  centroid /= 15.0;

  ArrayGeometry geo;
  for (double v : x) geo.mic_positions_relative.push_back({v - centroid, 0.0, 0.0});
  geo.reference_index = 0;
  geo.validate();
  return geo;
}

PairList default_pairs() {
  return {{0, 14}, {1, 13}, {2, 12}, {0, 6}, {11, 3},
          {10, 4}, {11, 7}, {6, 9},  {7, 8}};
}

void validate_pairs(const PairList &pairs, size_t num_channels) {
  if (pairs.empty()) throw ConfigError("pair list is empty");
  for (const auto &[i, j] : pairs) {
    if (i == j) throw ConfigError("pair with identical indices");
    if (i >= num_channels || j >= num_channels)
      throw ConfigError("pair index out of range");
  }
}

}  // namespace beamsep
