// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "beamsep/rng.hpp"
#include "beamsep/wav_io.hpp"
#include "doctest.h"

using namespace beamsep;

namespace {

std::string tmp_path(const char *name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::vector<uint8_t> slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void spit(const std::string &path, const std::vector<uint8_t> &bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("float32 wav round trip is bit exact") {
  Rng rng(41);
  MultiChannelWaveform wave(2, 777, 16000);
  // quantize through float so the file can represent each sample exactly
  for (double &v : wave.data) v = static_cast<float>(rng.uniform(-1.0, 1.0));

  const std::string path = tmp_path("beamsep_f32.wav");
  write_wav(path, wave, WavEncoding::kFloat32);
  const auto back = read_wav(path);
  REQUIRE(back.num_channels == 2);
  REQUIRE(back.num_samples == 777);
  CHECK(back.sample_rate == 16000);
  for (size_t i = 0; i < wave.data.size(); ++i)
    CHECK(back.data[i] == wave.data[i]);
  std::remove(path.c_str());
}

TEST_CASE("pcm16 clips +1.0 to 32767") {
  MultiChannelWaveform wave(1, 4, 16000);
  wave.at(0, 0) = 1.0;
  wave.at(0, 1) = -1.0;
  wave.at(0, 2) = 2.5;    // far out of range
  wave.at(0, 3) = 0.5;

  const std::string path = tmp_path("beamsep_pcm.wav");
  write_wav(path, wave, WavEncoding::kPcm16);
  const auto back = read_wav(path);
  CHECK(back.at(0, 0) == 32767.0 / 32768.0);
  CHECK(back.at(0, 1) == -1.0);
  CHECK(back.at(0, 2) == 32767.0 / 32768.0);
  CHECK(back.at(0, 3) == 0.5);  // 0.5 * 32768 = 16384 exactly
  std::remove(path.c_str());
}

TEST_CASE("pcm16 round trip of representable values is exact") {
  MultiChannelWaveform wave(1, 256, 16000);
  for (size_t i = 0; i < 256; ++i)
    wave.at(0, i) = static_cast<double>(static_cast<int>(i) - 128) / 32768.0 * 200.0;

  const std::string path = tmp_path("beamsep_pcm_rt.wav");
  write_wav(path, wave, WavEncoding::kPcm16);
  const auto back = read_wav(path);
  for (size_t i = 0; i < 256; ++i) CHECK(back.at(0, i) == wave.at(0, i));
  std::remove(path.c_str());
}

TEST_CASE("15-channel file preserves channel order") {
  // per-channel ramps with distinct slopes
  MultiChannelWaveform wave(15, 64, 16000);
  for (size_t c = 0; c < 15; ++c)
    for (size_t n = 0; n < 64; ++n)
      wave.at(c, n) = static_cast<float>(0.001 * static_cast<double>(c + 1) *
                                         static_cast<double>(n));

  const std::string path = tmp_path("beamsep_15ch.wav");
  write_wav(path, wave, WavEncoding::kFloat32);
  const auto back = read_wav(path);
  REQUIRE(back.num_channels == 15);
  for (size_t c = 0; c < 15; ++c)
    for (size_t n = 0; n < 64; ++n)
      CHECK(back.at(c, n) == wave.at(c, n));
  std::remove(path.c_str());
}

TEST_CASE("wav reader rejects broken files with distinct errors") {
  Rng rng(43);
  MultiChannelWaveform wave(1, 100, 16000);
  for (double &v : wave.data) v = rng.uniform(-0.5, 0.5);
  const std::string path = tmp_path("beamsep_broken.wav");
  write_wav(path, wave, WavEncoding::kPcm16);
  const std::vector<uint8_t> good = slurp(path);
  REQUIRE(good.size() == 44 + 200);

  SUBCASE("not a RIFF file") {
    auto bad = good;
    bad[0] = 'X';
    spit(path, bad);
    CHECK_THROWS_AS(read_wav(path), MalformedHeaderError);
  }
  SUBCASE("truncated data chunk") {
    auto bad = good;
    bad.resize(good.size() - 37);
    spit(path, bad);
    CHECK_THROWS_AS(read_wav(path), TruncatedFileError);
  }
  SUBCASE("shorter than any header") {
    spit(path, {0x52, 0x49, 0x46});
    CHECK_THROWS_AS(read_wav(path), TruncatedFileError);
  }
  SUBCASE("unsupported codec") {
    auto bad = good;
    bad[20] = 7;  // mu-law format tag
    spit(path, bad);
    CHECK_THROWS_AS(read_wav(path), UnsupportedCodecError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_wav(tmp_path("beamsep_no_such.wav")), IoError);
  }
  std::remove(path.c_str());
}

TEST_CASE("write_wav refuses an empty waveform") {
  MultiChannelWaveform empty;
  CHECK_THROWS_AS(write_wav(tmp_path("beamsep_empty.wav"), empty), DomainError);
}
