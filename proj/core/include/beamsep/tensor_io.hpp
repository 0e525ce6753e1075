// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef BEAMSEP_TENSOR_IO_HPP
#define BEAMSEP_TENSOR_IO_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "beamsep/common.hpp"

namespace beamsep {

// Binary tensor interchange: an 8-byte little-endian header length, a JSON
// header {"dtype": "f64"|"c128", "layout": "row-major", "schema_version": 1,
// "shape": [...]}, then the raw little-endian payload.
struct Tensor {
  std::vector<size_t> shape;
  bool is_complex = false;
  std::vector<double> real_data;          // when !is_complex
  std::vector<std::complex<double>> complex_data;  // when is_complex

  size_t element_count() const {
    size_t n = 1;
    for (size_t s : shape) n *= s;
    return n;
  }
};

void write_tensor(const std::string &path, const Tensor &tensor);
Tensor read_tensor(const std::string &path);

}  // namespace beamsep

#endif  // BEAMSEP_TENSOR_IO_HPP
