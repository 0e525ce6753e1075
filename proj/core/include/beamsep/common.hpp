// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_COMMON_HPP
#define BEAMSEP_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamsep {

using cplx = std::complex<double>;

// invalid config values, unknown keys, bad CLI usage
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

// mismatched tensor/channel shapes between arguments
struct ShapeError : std::runtime_error {
  explicit ShapeError(const std::string &msg) : std::runtime_error(msg) {}
};

// argument outside the mathematical domain of an operation
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string &msg) : std::runtime_error(msg) {}
};

// filesystem level failures (open/read/write)
struct IoError : std::runtime_error {
  explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

// structurally invalid file contents
struct FormatError : IoError {
  explicit FormatError(const std::string &msg) : IoError(msg) {}
};

// WAV parsing failures, kept distinct so callers can tell them apart
struct MalformedHeaderError : FormatError {
  explicit MalformedHeaderError(const std::string &msg) : FormatError(msg) {}
};
struct TruncatedFileError : FormatError {
  explicit TruncatedFileError(const std::string &msg) : FormatError(msg) {}
};
struct UnsupportedCodecError : FormatError {
  explicit UnsupportedCodecError(const std::string &msg) : FormatError(msg) {}
};

}  // namespace beamsep

#endif  // BEAMSEP_COMMON_HPP
