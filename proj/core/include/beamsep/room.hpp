// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_ROOM_HPP
#define BEAMSEP_ROOM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "beamsep/common.hpp"
#include "beamsep/geometry.hpp"
#include "beamsep/rng.hpp"
#include "beamsep/waveform.hpp"

namespace beamsep {

struct RoomSpec {
  Vec3 dimensions = {6.0, 5.0, 3.0};  // meters
  double t60 = 0.3;                   // seconds; 0 means anechoic
  double speed_of_sound = 343.0;

  double volume() const {
    return dimensions[0] * dimensions[1] * dimensions[2];
  }
  double surface() const {
    return 2.0 * (dimensions[0] * dimensions[1] + dimensions[0] * dimensions[2] +
                  dimensions[1] * dimensions[2]);
  }
  // Sabine uniform absorption for the requested t60
  double sabine_absorption() const { return 0.161 * volume() / (surface() * t60); }

  void validate() const;
};

struct ImpulseResponse {
  std::vector<double> taps;
  int sample_rate = 16000;
};

// max_order default: ceil(t60 * c / min dimension), capped at 30
int default_max_order(const RoomSpec &room);

// Allen-Berkley image-source impulse response with 81-tap windowed-sinc
// fractional delays. Wall reflections are uniform and sign inverting
// (coefficient -beta), beta = wall_reflection(room).
// Direct path amplitude 1/(4 pi d) at delay d/c.
ImpulseResponse simulate_rir(const RoomSpec &room, const Vec3 &source,
                             const Vec3 &mic, int max_order,
                             int sample_rate = 16000);

// variant with an explicit reflection magnitude, used to share the image
// enumeration setup across the microphones of an array
ImpulseResponse simulate_rir_with_beta(const RoomSpec &room, const Vec3 &source,
                                       const Vec3 &mic, int max_order,
                                       double beta, int sample_rate = 16000);

// uniform wall reflection magnitude realizing the room's t60: the Sabine
// absorption for t60, inverted through Eyring's decay law (which is the
// rate a uniform-reflection image set actually decays at)
double wall_reflection(const RoomSpec &room);

// Schroeder backward-integrated T60 estimate: line fit on the energy-decay
// curve over -5..-35 dB, falling back to -5..-25 then -5..-15 when the
// decay range is too shallow. Returns nullopt when even -15 dB is missing.
std::optional<double> schroeder_t60(const std::vector<double> &taps,
                                    int sample_rate);

struct SceneRanges {
  Vec3 room_min = {4.0, 4.0, 2.5};
  Vec3 room_max = {10.0, 8.0, 6.0};
  double t60_min = 0.05;
  double t60_max = 0.7;
  std::vector<double> sir_choices_db = {-6.0, 0.0, 6.0};
  double overlap_min = 0.6;
  double overlap_max = 1.0;
  double distance_min = 1.0;
  double distance_max = 5.0;
  double wall_margin = 0.5;

  void validate() const;
};

struct SceneSpec {
  RoomSpec room;
  Vec3 array_center = {0.0, 0.0, 0.0};
  double array_orientation_rad = 0.0;  // azimuth of the array axis
  Vec3 target_position = {0.0, 0.0, 0.0};
  Vec3 interferer_position = {0.0, 0.0, 0.0};
  double target_doa_deg = 90.0;  // relative to the array axis, at the centroid
  double sir_db = 0.0;
  double overlap_ratio = 1.0;
  uint64_t seed = 0;
};

// Algorithm-1 style scene sampling. t60 is resampled until the Sabine
// absorption is at most 0.95 so every sampled scene is renderable.
SceneSpec sample_scene(Rng &rng, const SceneRanges &ranges);

struct MixtureBundle {
  MultiChannelWaveform mixture;
  MultiChannelWaveform target_reverberant;
  MultiChannelWaveform interferer_reverberant;  // already SIR scaled
  size_t overlap_begin = 0;  // overlapped region on the output timeline
  size_t overlap_end = 0;
};

// Reverberate both sources at the array, place the interferer so the
// overlapped fraction of the target equals scene.overlap_ratio (within one
// hop), scale the reverberant interferer so the overlapped-region energy
// ratio on the reference channel equals scene.sir_db exactly, then mix by
// sample-exact addition.
MixtureBundle synthesize_mixture(const SceneSpec &scene,
                                 const MultiChannelWaveform &target,
                                 const MultiChannelWaveform &interferer,
                                 const ArrayGeometry &geometry,
                                 size_t hop_length = 256);

// absolute mic positions for a scene (orientation applied, center added)
std::vector<Vec3> scene_mic_positions(const SceneSpec &scene,
                                      const ArrayGeometry &geometry);

}  // namespace beamsep

#endif  // BEAMSEP_ROOM_HPP
