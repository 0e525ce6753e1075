// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_MANIFEST_HPP
#define BEAMSEP_MANIFEST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "beamsep/common.hpp"
#include "beamsep/room.hpp"

namespace beamsep {

// One simulated utterance: the scene that produced it plus where the
// rendered WAVs live (paths relative to the manifest's directory).
struct UtteranceEntry {
  std::string id;
  SceneSpec scene;
  double doa_deg = 0.0;  // target DOA, duplicated from the scene for readers
                         // that only need steering information
  std::string mixture_path;
  std::string target_stem_path;
  std::string interferer_stem_path;
};

// Dataset manifest. schema_version 1.
struct Manifest {
  int schema_version = 1;
  uint64_t master_seed = 0;
  std::string config_fingerprint;
  std::vector<UtteranceEntry> utterances;
  std::string root;  // directory of the manifest file; not serialized

  // path helpers resolving against root
  std::string resolve(const std::string &relative) const;
};

void write_manifest(const Manifest &manifest, const std::string &path);

// strict load: unknown keys rejected, required keys and types enforced
Manifest read_manifest(const std::string &path);

}  // namespace beamsep

#endif  // BEAMSEP_MANIFEST_HPP
