// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_CONFIG_HPP
#define BEAMSEP_CONFIG_HPP

#include <cstdint>
#include <string>

#include "beamsep/geometry.hpp"
#include "beamsep/room.hpp"
#include "beamsep/stft.hpp"

namespace beamsep {

// Toolkit configuration: JSON file with full defaulting, unknown keys
// rejected, CLI flags applied on top.
struct PipelineConfig {
  // stft
  size_t fft_size = 512;
  size_t window_length = 512;
  size_t hop_length = 256;
  int sample_rate = 16000;

  ArrayGeometry geometry;   // default 15-mic linear array
  PairList pairs;           // default 9 multi-scale pairs
  SceneRanges ranges;

  double speed_of_sound = 343.0;
  double mask_bound = 10.0;       // oracle CRM clip K
  double af_threshold = 0.5;      // af_heuristic tau
  double diagonal_loading = 1e-6; // MVDR eps
  double source_duration_s = 3.0;
  uint64_t seed = 0;

  PipelineConfig();

  StftConfig stft_config() const {
    return StftConfig(fft_size, window_length, hop_length);
  }

  void validate() const;

  // canonical serialization: sorted keys, stable float formatting
  std::string to_canonical_json() const;
  // FNV-1a 64 hash of the canonical serialization, hex
  std::string fingerprint() const;

  static PipelineConfig from_json_text(const std::string &text);
  static PipelineConfig load(const std::string &path);
  void save(const std::string &path) const;
};

}  // namespace beamsep

#endif  // BEAMSEP_CONFIG_HPP
