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

#ifndef SURPRISAL_GUIDE_H_
#define SURPRISAL_GUIDE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surprisal/report.h"

namespace surprisal {

// Closed SA interval [low, high].
struct SaRange {
  double low = 0.0;
  double high = 0.0;
  std::string label;
};

inline constexpr std::size_t kDefaultSampleCount = 100;

struct RangeSample {
  SaRange range;
  std::vector<std::string> ids;  // in report order
  std::size_t qualifying = 0;
  bool shortfall = false;        // fewer than `count` inputs qualified
  std::string error;             // set when the range could not be sampled
};

// Uniform sample without replacement among clean report rows whose SA lies
// in the range. Returns every qualifying id with `shortfall` set when fewer
// than `count` qualify; throws kEmptySelection when none do.
RangeSample sample_by_range(const SurpriseReport& report, const SaRange& range,
                            std::size_t count, std::uint64_t seed);

// Samples from [0, U/4], [0, 2U/4], [0, 3U/4] and [0, U], labelled "1/4" ..
// "4/4". A range that cannot be sampled carries its error instead of ids.
// Throws kInvalidArgument unless U > 0.
std::vector<RangeSample> four_range_plan(const SurpriseReport& report, double upper_bound,
                                         std::size_t count, std::uint64_t seed);

std::string range_plan_to_json(const std::vector<RangeSample>& plan,
                               const std::vector<std::string>& provenance = {});

enum class CurveDirection { kAscending, kDescending, kRandom };

std::string_view curve_direction_name(CurveDirection d);

struct CurvePoint {
  double fraction = 0.0;
  std::size_t included = 0;
  double accuracy = 0.0;
};

inline constexpr int kRandomCurveRepetitions = 20;

// Accuracy of growing prefixes of the inputs ordered by SA (ties by row
// order). Step i of `steps` includes ceil(i * N / steps) inputs. Random
// direction averages kRandomCurveRepetitions reseeded shuffles. Flagged
// report rows are left out.
std::vector<CurvePoint> sa_order_curve(const SurpriseReport& report,
                                       std::span<const std::uint8_t> correct,
                                       CurveDirection direction, std::size_t steps,
                                       std::uint64_t seed = 0);

void write_curve_csv(std::ostream& out, CurveDirection direction,
                     const std::vector<CurvePoint>& curve, bool header = true);

}  // namespace surprisal

#endif  // SURPRISAL_GUIDE_H_
