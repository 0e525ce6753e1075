// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_WAV_IO_HPP
#define BEAMSEP_WAV_IO_HPP

#include <string>

#include "beamsep/common.hpp"
#include "beamsep/waveform.hpp"

namespace beamsep {

enum class WavEncoding { kPcm16, kFloat32 };

// RIFF/WAVE reader: PCM16 or IEEE float32, any channel count, little endian.
// PCM16 samples are normalized to [-1, 1) by 1/32768.
// Throws MalformedHeaderError / TruncatedFileError / UnsupportedCodecError.
MultiChannelWaveform read_wav(const std::string &path);

// Writer for both encodings. PCM16 scales by 32768, rounds to nearest and
// clips to [-32768, 32767] (so +1.0 stores as 32767).
void write_wav(const std::string &path, const MultiChannelWaveform &wave,
               WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace beamsep

#endif  // BEAMSEP_WAV_IO_HPP
