// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_METRICS_HPP
#define BEAMSEP_METRICS_HPP

#include <string>
#include <vector>

#include "beamsep/common.hpp"
#include "beamsep/waveform.hpp"

namespace beamsep {

struct SiSnrResult {
  double value_db = 0.0;     // clamped to [-cap, +cap]
  double scale_factor = 0.0; // optimal projection gain <e,s>/||s||^2
};

inline constexpr double kSiSnrCapDb = 80.0;

// Scale-invariant SNR: both arguments mean-removed, the estimate projected
// onto the reference, 10 log10 of projection power over residual power.
// Zero reference -> DomainError. Zero estimate -> -cap.
SiSnrResult si_snr(const MultiChannelWaveform &estimate,
                   const MultiChannelWaveform &reference);

struct UtteranceScore {
  std::string id;
  double si_snr_in = 0.0;
  double si_snr_out = 0.0;
  double delta = 0.0;
  bool ok = false;
  std::string error;  // set when !ok
};

struct EvalReport {
  std::string method;
  std::string config_fingerprint;
  std::vector<UtteranceScore> utterances;
  double mean_delta = 0.0;
  double median_delta = 0.0;
  double std_delta = 0.0;
  double mean_in = 0.0;
  double mean_out = 0.0;
  bool complete = true;

  void finalize();  // fill the aggregate fields from per-utterance scores
};

std::string report_to_json(const EvalReport &report);
std::string report_to_table(const EvalReport &report);

}  // namespace beamsep

#endif  // BEAMSEP_METRICS_HPP
