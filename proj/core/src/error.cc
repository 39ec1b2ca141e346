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

#include "surprisal/error.h"

namespace surprisal {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kUnknownLayer: return "unknown_layer";
    case ErrorCode::kColumnOutOfRange: return "column_out_of_range";
    case ErrorCode::kMissingLabels: return "missing_labels";
    case ErrorCode::kLabelLengthMismatch: return "label_length_mismatch";
    case ErrorCode::kNonFinite: return "non_finite";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kBadMagic: return "bad_magic";
    case ErrorCode::kMalformedHeader: return "malformed_header";
    case ErrorCode::kUnsupportedDtype: return "unsupported_dtype";
    case ErrorCode::kFortranOrder: return "fortran_order";
    case ErrorCode::kBadShape: return "bad_shape";
    case ErrorCode::kTruncatedPayload: return "truncated_payload";
    case ErrorCode::kBadManifest: return "bad_manifest";
    case ErrorCode::kRowCountMismatch: return "row_count_mismatch";
    case ErrorCode::kNoNeuronsRetained: return "no_neurons_retained";
    case ErrorCode::kClassTooSmall: return "class_too_small";
    case ErrorCode::kFactorizationFailed: return "factorization_failed";
    case ErrorCode::kDimensionMismatch: return "dimension_mismatch";
    case ErrorCode::kSingleClass: return "single_class";
    case ErrorCode::kUnknownClass: return "unknown_class";
    case ErrorCode::kDegenerateReference: return "degenerate_reference";
    case ErrorCode::kEmptySelection: return "empty_selection";
    case ErrorCode::kInsufficientRows: return "insufficient_rows";
  }
  return "unknown";
}

}  // namespace surprisal
