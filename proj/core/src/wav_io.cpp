// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/wav_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace beamsep {

namespace {

constexpr uint16_t kFormatPcm = 0x0001;
constexpr uint16_t kFormatFloat = 0x0003;
constexpr uint16_t kFormatExtensible = 0xFFFE;

uint32_t read_u32(const uint8_t *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t read_u16(const uint8_t *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<uint8_t> &buf, uint32_t v) {
  buf.push_back(static_cast<uint8_t>(v & 0xFF));
  buf.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  buf.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  buf.push_back(static_cast<uint8_t>((v >> 24) & 0xFF));
}

void put_u16(std::vector<uint8_t> &buf, uint16_t v) {
  buf.push_back(static_cast<uint8_t>(v & 0xFF));
  buf.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
}

void put_tag(std::vector<uint8_t> &buf, const char *tag) {
  buf.insert(buf.end(), tag, tag + 4);
}

}  // namespace

MultiChannelWaveform read_wav(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());

  if (bytes.size() < 12) throw TruncatedFileError(path + ": shorter than RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw MalformedHeaderError(path + ": not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t data_off = 0, data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char *tag = reinterpret_cast<const char *>(bytes.data() + pos);
    const uint32_t len = read_u32(bytes.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + len > bytes.size())
      throw TruncatedFileError(path + ": chunk exceeds file size");
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      if (len < 16) throw MalformedHeaderError(path + ": fmt chunk too short");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        // true format lives in the first two bytes of the SubFormat GUID
        if (len < 40)
          throw MalformedHeaderError(path + ": extensible fmt chunk too short");
        format = read_u16(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      data_off = body;
      data_len = len;
    }
    pos = body + len + (len & 1);  // chunks are word aligned
  }

  if (!have_fmt) throw MalformedHeaderError(path + ": missing fmt chunk");
  if (data_off == 0) throw MalformedHeaderError(path + ": missing data chunk");
  if (channels == 0 || rate == 0)
    throw MalformedHeaderError(path + ": zero channels or sample rate");

  size_t bytes_per_sample;
  if (format == kFormatPcm && bits == 16) {
    bytes_per_sample = 2;
  } else if (format == kFormatFloat && bits == 32) {
    bytes_per_sample = 4;
  } else {
    throw UnsupportedCodecError(path + ": unsupported codec (format " +
                                std::to_string(format) + ", " +
                                std::to_string(bits) + " bit)");
  }

  const size_t frame_bytes = bytes_per_sample * channels;
  if (data_len % frame_bytes != 0)
    throw TruncatedFileError(path + ": data chunk not a whole number of frames");
  const size_t frames = data_len / frame_bytes;

  MultiChannelWaveform wave(channels, frames, static_cast<int>(rate));
  const uint8_t *d = bytes.data() + data_off;
  if (bytes_per_sample == 2) {
    for (size_t n = 0; n < frames; ++n)
      for (size_t c = 0; c < channels; ++c) {
        const uint16_t raw = read_u16(d + (n * channels + c) * 2);
        const int16_t s = static_cast<int16_t>(raw);
        wave.at(c, n) = static_cast<double>(s) / 32768.0;
      }
  } else {
    for (size_t n = 0; n < frames; ++n)
      for (size_t c = 0; c < channels; ++c) {
        uint32_t raw = read_u32(d + (n * channels + c) * 4);
        float f;
        std::memcpy(&f, &raw, 4);
        wave.at(c, n) = static_cast<double>(f);
      }
  }
  return wave;
}

void write_wav(const std::string &path, const MultiChannelWaveform &wave,
               WavEncoding encoding) {
  if (wave.num_channels == 0) throw DomainError("cannot write empty waveform");
  const uint16_t channels = static_cast<uint16_t>(wave.num_channels);
  const uint32_t rate = static_cast<uint32_t>(wave.sample_rate);
  const uint16_t bits = encoding == WavEncoding::kPcm16 ? 16 : 32;
  const uint16_t format = encoding == WavEncoding::kPcm16 ? kFormatPcm : kFormatFloat;
  const uint32_t block = channels * bits / 8;
  const uint32_t data_len = static_cast<uint32_t>(wave.num_samples * block);

  std::vector<uint8_t> buf;
  buf.reserve(44 + data_len);
  put_tag(buf, "RIFF");
  put_u32(buf, 36 + data_len);
  put_tag(buf, "WAVE");
  put_tag(buf, "fmt ");
  put_u32(buf, 16);
  put_u16(buf, format);
  put_u16(buf, channels);
  put_u32(buf, rate);
  put_u32(buf, rate * block);
  put_u16(buf, static_cast<uint16_t>(block));
  put_u16(buf, bits);
  put_tag(buf, "data");
  put_u32(buf, data_len);

  if (encoding == WavEncoding::kPcm16) {
    for (size_t n = 0; n < wave.num_samples; ++n)
      for (size_t c = 0; c < channels; ++c) {
        const double scaled = std::nearbyint(wave.at(c, n) * 32768.0);
        const double clipped = std::clamp(scaled, -32768.0, 32767.0);
        put_u16(buf, static_cast<uint16_t>(static_cast<int16_t>(clipped)));
      }
  } else {
    for (size_t n = 0; n < wave.num_samples; ++n)
      for (size_t c = 0; c < channels; ++c) {
        const float f = static_cast<float>(wave.at(c, n));
        uint32_t raw;
        std::memcpy(&raw, &f, 4);
        put_u32(buf, raw);
      }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char *>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace beamsep
