// Copyright 2026 The Surprisal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SURPRISAL_TESTS_GENERATORS_H_
#define SURPRISAL_TESTS_GENERATORS_H_

// Seeded random instances for property tests.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "surprisal/rng.h"
#include "surprisal/trace.h"

namespace surprisal::gen {

inline Matrix normal_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0,
                            double shift = 0.0) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = shift + scale * rng.normal();
  return m;
}

// Values on a coarse grid so that ties and repeated values are common.
inline Matrix grid_matrix(Rng& rng, std::size_t rows, std::size_t cols, int levels) {
  Matrix m(rows, cols);
  for (double& v : m.data()) {
    v = static_cast<double>(rng.uniform_index(static_cast<std::uint64_t>(levels))) / 4.0;
  }
  return m;
}

inline std::vector<ClassLabel> labels(Rng& rng, std::size_t n, std::size_t classes) {
  std::vector<ClassLabel> out(n);
  for (auto& l : out) l.value = static_cast<std::int64_t>(rng.uniform_index(classes));
  return out;
}

inline std::vector<std::int64_t> raw(const std::vector<ClassLabel>& labels) {
  std::vector<std::int64_t> out;
  for (const ClassLabel& l : labels) out.push_back(l.value);
  return out;
}

inline std::vector<LayerSpec> layout(const std::vector<std::size_t>& widths) {
  std::vector<LayerSpec> specs;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < widths.size(); ++i) {
    specs.push_back(LayerSpec{"L" + std::to_string(i), widths[i], offset});
    offset += widths[i];
  }
  return specs;
}

// `v` rounded to a multiple of 2^-30. Sums of such values with magnitude
// below 2^22 are exact in double precision.
inline double dyadic(double v) { return std::ldexp(std::round(std::ldexp(v, 30)), -30); }

inline Matrix dyadic(Matrix m) {
  for (double& v : m.data()) v = dyadic(v);
  return m;
}

inline std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform_index(hi - lo + 1));
}

}  // namespace surprisal::gen

#endif  // SURPRISAL_TESTS_GENERATORS_H_
