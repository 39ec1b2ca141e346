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

#ifndef SURPRISAL_ERROR_H_
#define SURPRISAL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace surprisal {

// Every failure the library reports carries one of these codes. The CLI
// prints the code name so callers can dispatch on it.
enum class ErrorCode {
  kInvalidArgument,
  kUnknownLayer,
  kColumnOutOfRange,
  kMissingLabels,
  kLabelLengthMismatch,
  kNonFinite,
  kIo,
  kBadMagic,
  kMalformedHeader,
  kUnsupportedDtype,
  kFortranOrder,
  kBadShape,
  kTruncatedPayload,
  kBadManifest,
  kRowCountMismatch,
  kNoNeuronsRetained,
  kClassTooSmall,
  kFactorizationFailed,
  kDimensionMismatch,
  kSingleClass,
  kUnknownClass,
  kDegenerateReference,
  kEmptySelection,
  kInsufficientRows,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace surprisal

#endif  // SURPRISAL_ERROR_H_
