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

#ifndef SURPRISAL_REPORT_H_
#define SURPRISAL_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "surprisal/trace.h"

namespace surprisal {

enum class SaKind { kLsa, kDsa };

std::string_view sa_kind_name(SaKind kind);

struct SurpriseEntry {
  std::string id;
  // NaN when the row was flagged.
  double value = 0.0;
  // Absent for unconditioned scoring.
  std::optional<ClassLabel> class_used;
  // Empty when the row scored cleanly, else "<error_code>: <detail>".
  std::string flag;

  bool ok() const noexcept { return flag.empty(); }
};

struct SurpriseReport {
  SaKind kind = SaKind::kLsa;
  std::string selector;
  std::vector<SurpriseEntry> entries;

  // Values of the rows that scored cleanly, in row order.
  std::vector<double> ok_values() const;
  std::size_t flagged_count() const;
};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// CSV with schema `id,sa,class_used,flag`, preceded by `# `-prefixed
// provenance lines. Flagged rows leave `sa` empty.
void write_report_csv(std::ostream& out, const SurpriseReport& report,
                      const std::vector<std::string>& provenance = {});
SurpriseReport read_report_csv(std::istream& in);
SurpriseReport read_report_csv_file(const std::filesystem::path& path);

}  // namespace surprisal

#endif  // SURPRISAL_REPORT_H_
