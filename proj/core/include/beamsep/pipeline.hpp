// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_PIPELINE_HPP
#define BEAMSEP_PIPELINE_HPP

#include <string>

#include "beamsep/config.hpp"
#include "beamsep/manifest.hpp"
#include "beamsep/metrics.hpp"
#include "beamsep/waveform.hpp"

namespace beamsep {

enum class SeparationMethod { kTfMask, kFilterSum, kMvdr, kDelaySum };
enum class MaskSource { kOracle, kAfHeuristic, kFile };

SeparationMethod parse_method(const std::string &name);
MaskSource parse_mask_source(const std::string &name);
std::string method_name(SeparationMethod method);
std::string mask_source_name(MaskSource source);

struct SimulateOptions {
  PipelineConfig config;
  size_t count = 20;
  std::string out_dir;
  int jobs = 0;  // <= 0: all available cores
};

// Render `count` two-speaker scenes (seeds derived from config.seed by
// counter), write mixture + stems as float32 WAVs plus manifest.json.
// Returns the manifest path. Output is byte-identical for a fixed seed
// regardless of the job count.
std::string run_simulate(const SimulateOptions &opts);

struct SeparateOptions {
  PipelineConfig config;
  std::string manifest_path;
  SeparationMethod method = SeparationMethod::kMvdr;
  MaskSource mask_source = MaskSource::kOracle;
  std::string out_dir;
  std::string tensor_dir;  // masks (<id>.target/.noise.tensor) or filters
                           // (<id>.filters.tensor) for mask_source=file
  int jobs = 0;
};

struct SeparateRunSummary {
  size_t num_ok = 0;
  size_t num_failed = 0;
  std::string log_path;
};

// One mono WAV per utterance into out_dir; per-utterance failures are
// logged and skipped. The run log records the config fingerprint and
// per-utterance timing.
SeparateRunSummary run_separate(const SeparateOptions &opts);

// Single-utterance separation core: STFT -> features -> masks ->
// integration -> iSTFT. delay_sum touches only the DOA; oracle masks read
// the stems; MVDR computes one time-invariant W(f) from whole-utterance
// masked PSDs.
MultiChannelWaveform separate_utterance(const PipelineConfig &config,
                                        const Manifest &manifest,
                                        const UtteranceEntry &utt,
                                        SeparationMethod method,
                                        MaskSource mask_source,
                                        const std::string &tensor_dir);

struct EvaluateOptions {
  PipelineConfig config;
  std::string manifest_path;
  std::string separated_dir;
  std::string report_path;  // empty: don't write a file
  int jobs = 0;
};

// si_snr_in: mixture reference channel vs the reverberant target stem;
// si_snr_out: separated output vs the same stem. Missing files are listed
// per utterance and mark the report incomplete (not fatal).
EvalReport run_evaluate(const EvaluateOptions &opts);

struct FeaturesOptions {
  PipelineConfig config;
  std::string manifest_path;
  std::string out_dir;
  bool write_ipd = true;
  bool write_af = true;
  bool write_steering = true;
  int jobs = 0;
};

// Export IPD ([pairs x frames x bins] f64), AF ([frames x bins] f64) and
// steering vectors ([channels x bins] c128) per utterance as tensor files.
void run_features(const FeaturesOptions &opts);

}  // namespace beamsep

#endif  // BEAMSEP_PIPELINE_HPP
