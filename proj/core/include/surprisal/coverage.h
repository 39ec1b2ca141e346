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

#ifndef SURPRISAL_COVERAGE_H_
#define SURPRISAL_COVERAGE_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "surprisal/lsa.h"
#include "surprisal/trace.h"

namespace surprisal {

// n equal buckets over (0, U]; bucket i (1-based) is (U(i-1)/n, U i/n].
struct BucketConfig {
  double upper_bound = 0.0;
  std::size_t bucket_count = 0;

  // Throws kInvalidArgument unless U > 0 (finite) and n >= 1.
  void validate() const;
  // Upper edge of 1-based bucket i; edge(0) == 0 and edge(n) == U exactly.
  double edge(std::size_t i) const;
  // 0-based bucket holding `v`, or nullopt for v <= 0, v > U, or NaN.
  std::optional<std::size_t> bucket_of(double v) const;
};

struct CoverageResult {
  std::string criterion;
  std::size_t covered = 0;
  std::size_t total = 0;
  double ratio = 0.0;
  // One flag per target (bucket, neuron, section, or corner).
  std::vector<bool> occupancy;

  static CoverageResult from_occupancy(std::string criterion, std::vector<bool> occupancy);
};

// Union of two results over the same targets.
CoverageResult merge(const CoverageResult& a, const CoverageResult& b);

// Flagged (NaN) values are ignored.
CoverageResult surprise_coverage(std::span<const double> sa_values, const BucketConfig& cfg,
                                 std::string criterion = "sc");

inline constexpr double kDefaultNcThreshold = 0.5;
inline constexpr std::size_t kDefaultKmncSections = 1000;

enum class NcScaling { kPerInputLayerMinMax, kRaw };

// A neuron is covered when some input drives it above `threshold`. With
// min-max scaling each input's layer is rescaled to [0, 1] first; a layer
// whose values are all equal scales to zeros.
CoverageResult neuron_coverage(const TraceSet& traces, double threshold = kDefaultNcThreshold,
                               NcScaling scaling = NcScaling::kPerInputLayerMinMax);

// Per-neuron activation range observed on the training set.
struct NeuronRanges {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t size() const noexcept { return min.size(); }
};

NeuronRanges ranges_from_profile(const TrainingProfile& profile);
// Column-wise min and max over every row. Throws kInvalidArgument when
// `traces` is empty.
NeuronRanges ranges_from_traces(const TraceSet& traces);

// Each neuron's [min, max] is cut into k sections [lo + w(j-1), lo + w j),
// the last one closed at max. Values outside the range cover nothing. A
// zero-width range has only its first section reachable, by an exact hit.
CoverageResult kmnc(const NeuronRanges& ranges, const TraceSet& traces,
                    std::size_t k = kDefaultKmncSections);

// Corner targets per neuron: lower (value < min) at 2i, upper (value > max)
// at 2i + 1. Returns {NBC, SNAC}; SNAC counts upper corners only.
std::pair<CoverageResult, CoverageResult> nbc_snac(const NeuronRanges& ranges,
                                                   const TraceSet& traces);

enum class Criterion { kLsc, kDsc, kNc, kKmnc, kNbc, kSnac };

std::string_view criterion_name(Criterion c);
std::optional<Criterion> parse_criterion(std::string_view name);
bool is_surprise_criterion(Criterion c);

struct CriterionConfig {
  Criterion criterion = Criterion::kLsc;
  BucketConfig buckets;                      // LSC / DSC
  double nc_threshold = kDefaultNcThreshold;  // NC
  NcScaling nc_scaling = NcScaling::kPerInputLayerMinMax;
  std::size_t k = kDefaultKmncSections;      // KMNC
  NeuronRanges ranges;                       // KMNC / NBC / SNAC
};

// SA values for LSC/DSC, traces for the neuron-level criteria.
using CoverageStep = std::variant<std::vector<double>, TraceSet>;

struct CumulativeRow {
  std::size_t step = 0;
  std::string criterion;
  std::size_t covered = 0;
  std::size_t total = 0;
  double ratio = 0.0;
};

// Row i is the coverage of the union of steps 0..i.
std::vector<CumulativeRow> cumulative_coverage(const std::vector<CoverageStep>& steps,
                                               const CriterionConfig& cfg);

// CSV `step,criterion,ratio`.
void write_cumulative_csv(std::ostream& out, const std::vector<CumulativeRow>& rows,
                          const std::vector<std::string>& provenance = {});

// Linear-interpolation percentile of the finite values; q in [0, 1].
// Offered as a starting point for choosing U, e.g. q = 0.99 over the
// training set's SA.
double suggest_upper_bound(std::span<const double> values, double q = 0.99);

}  // namespace surprisal

#endif  // SURPRISAL_COVERAGE_H_
