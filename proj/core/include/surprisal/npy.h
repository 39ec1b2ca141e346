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

#ifndef SURPRISAL_NPY_H_
#define SURPRISAL_NPY_H_

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "surprisal/trace.h"

namespace surprisal {

// Reader and writer for version-1.0 `.npy` array files.
//
// Only the narrow subset used for activation traces is accepted by
// read_array_file: little-endian `<f4`/`<f8`, C order, two-dimensional.
// Each violation maps to its own ErrorCode (kBadMagic, kMalformedHeader,
// kUnsupportedDtype, kFortranOrder, kBadShape, kTruncatedPayload).

Matrix read_array_file(const std::filesystem::path& path);
Matrix parse_array(std::string_view bytes);

// Always writes `<f8`. Throws kIo if the file cannot be written and
// kNonFinite if the matrix holds NaN or Inf.
void write_array_file(const std::filesystem::path& path, const Matrix& matrix);
std::string serialize_array(const Matrix& matrix);

// Integer label vectors. Accepts integer dtypes (`|i1`..`<i8`, unsigned
// likewise) and integral-valued floats, with shape (n,) or (n, 1).
std::vector<std::int64_t> read_label_array_file(const std::filesystem::path& path);
std::vector<std::int64_t> parse_label_array(std::string_view bytes);

// Writes `<i8` with shape (n, 1).
void write_label_array_file(const std::filesystem::path& path,
                            const std::vector<std::int64_t>& labels);

}  // namespace surprisal

#endif  // SURPRISAL_NPY_H_
