// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_SOURCES_HPP
#define BEAMSEP_SOURCES_HPP

#include <vector>

#include "beamsep/rng.hpp"
#include "beamsep/waveform.hpp"

namespace beamsep {

// Deterministic speech-like test source: a stream of voiced syllables
// (harmonic stacks with pitch glides and formant-style spectral shaping)
// and unvoiced noise bursts under a syllabic amplitude envelope, with
// occasional short pauses. Peak-normalized to 0.5.
MultiChannelWaveform synth_speech_like(Rng &rng, double duration_s,
                                       int sample_rate = 16000);

}  // namespace beamsep

#endif  // BEAMSEP_SOURCES_HPP
