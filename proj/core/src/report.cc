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

#include "surprisal/report.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "surprisal/error.h"

namespace surprisal {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "report line " + std::to_string(line_no) + ": bad sa value '" + s + "'");
  }
  return v;
}

}  // namespace

std::string_view sa_kind_name(SaKind kind) { return kind == SaKind::kLsa ? "lsa" : "dsa"; }

std::vector<double> SurpriseReport::ok_values() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const SurpriseEntry& e : entries) {
    if (e.ok()) out.push_back(e.value);
  }
  return out;
}

std::size_t SurpriseReport::flagged_count() const {
  std::size_t n = 0;
  for (const SurpriseEntry& e : entries) n += e.ok() ? 0 : 1;
  return n;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_report_csv(std::ostream& out, const SurpriseReport& report,
                      const std::vector<std::string>& provenance) {
  out << "# kind=" << sa_kind_name(report.kind) << " selector=" << report.selector << '\n';
  for (const std::string& line : provenance) out << "# " << line << '\n';
  out << "id,sa,class_used,flag\n";
  for (const SurpriseEntry& e : report.entries) {
    if (e.id.find_first_of(",\n\r") != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "input id '" + e.id + "' contains a separator");
    }
    out << e.id << ',';
    if (e.ok()) out << format_double(e.value);
    out << ',';
    if (e.class_used) out << e.class_used->value;
    out << ',';
    for (char c : e.flag) out << (c == ',' || c == '\n' ? ';' : c);
    out << '\n';
  }
}

SurpriseReport read_report_csv(std::istream& in) {
  SurpriseReport report;
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto kind_at = line.find("kind=");
      if (!saw_header && kind_at != std::string::npos) {
        report.kind = line.compare(kind_at + 5, 3, "dsa") == 0 ? SaKind::kDsa : SaKind::kLsa;
        const auto sel_at = line.find("selector=");
        if (sel_at != std::string::npos) report.selector = line.substr(sel_at + 9);
      }
      continue;
    }
    if (!saw_header) {
      if (line != "id,sa,class_used,flag") {
        throw Error(ErrorCode::kInvalidArgument,
                    "report header must be 'id,sa,class_used,flag', got '" + line + "'");
      }
      saw_header = true;
      continue;
    }
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 4) {
      throw Error(ErrorCode::kInvalidArgument,
                  "report line " + std::to_string(line_no) + " has " + std::to_string(f.size()) +
                      " fields, expected 4");
    }
    SurpriseEntry e;
    e.id = f[0];
    e.flag = f[3];
    if (e.flag.empty()) {
      e.value = parse_double(f[1], line_no);
    } else {
      e.value = std::numeric_limits<double>::quiet_NaN();
    }
    if (!f[2].empty()) {
      std::int64_t c = 0;
      const auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), c);
      if (ec != std::errc() || ptr != f[2].data() + f[2].size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "report line " + std::to_string(line_no) + ": bad class '" + f[2] + "'");
      }
      e.class_used = ClassLabel{c};
    }
    report.entries.push_back(std::move(e));
  }
  if (!saw_header) throw Error(ErrorCode::kInvalidArgument, "report has no header line");
  return report;
}

SurpriseReport read_report_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  return read_report_csv(in);
}

}  // namespace surprisal
