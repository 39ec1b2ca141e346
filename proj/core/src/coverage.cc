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

#include "surprisal/coverage.h"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "surprisal/error.h"
#include "surprisal/report.h"

namespace surprisal {
namespace {

void check_ranges(const NeuronRanges& ranges, const TraceSet& traces) {
  if (ranges.min.size() != ranges.max.size()) {
    throw Error(ErrorCode::kInvalidArgument, "neuron range min/max lists differ in length");
  }
  if (ranges.size() != traces.num_neurons()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "training ranges cover " + std::to_string(ranges.size()) +
                    " neurons but traces have " + std::to_string(traces.num_neurons()));
  }
}

std::optional<std::size_t> section_of(double v, double lo, double hi, std::size_t k) {
  if (!(v >= lo && v <= hi)) return std::nullopt;
  if (hi == lo) return 0;
  const double w = (hi - lo) / static_cast<double>(k);
  auto lower = [&](std::size_t j) { return lo + w * static_cast<double>(j); };
  auto upper = [&](std::size_t j) { return j + 1 == k ? hi : lower(j + 1); };
  const double guess = std::floor((v - lo) / w);
  std::size_t j = guess <= 0.0 ? 0 : std::min(k - 1, static_cast<std::size_t>(guess));
  while (j > 0 && v < lower(j)) --j;
  while (j + 1 < k && v >= upper(j)) ++j;
  return j;
}

}  // namespace

void BucketConfig::validate() const {
  if (!(upper_bound > 0.0) || !std::isfinite(upper_bound)) {
    throw Error(ErrorCode::kInvalidArgument,
                "upper bound U must be positive and finite, got " + format_double(upper_bound));
  }
  if (bucket_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bucket count n must be at least 1");
  }
}

double BucketConfig::edge(std::size_t i) const {
  return upper_bound * (static_cast<double>(i) / static_cast<double>(bucket_count));
}

std::optional<std::size_t> BucketConfig::bucket_of(double v) const {
  if (!(v > 0.0) || v > upper_bound) return std::nullopt;
  const std::size_t n = bucket_count;
  const double guess = std::ceil(v / upper_bound * static_cast<double>(n));
  std::size_t i = guess < 1.0 ? 1 : std::min(n, static_cast<std::size_t>(guess));
  while (i > 1 && v <= edge(i - 1)) --i;
  while (i < n && v > edge(i)) ++i;
  return i - 1;
}

CoverageResult CoverageResult::from_occupancy(std::string criterion, std::vector<bool> occupancy) {
  CoverageResult r;
  r.criterion = std::move(criterion);
  r.total = occupancy.size();
  r.covered = static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), true));
  r.ratio = r.total == 0 ? 0.0 : static_cast<double>(r.covered) / static_cast<double>(r.total);
  r.occupancy = std::move(occupancy);
  return r;
}

CoverageResult merge(const CoverageResult& a, const CoverageResult& b) {
  if (a.occupancy.size() != b.occupancy.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot merge coverage over " + std::to_string(a.occupancy.size()) + " and " +
                    std::to_string(b.occupancy.size()) + " targets");
  }
  std::vector<bool> occ(a.occupancy.size());
  for (std::size_t i = 0; i < occ.size(); ++i) occ[i] = a.occupancy[i] || b.occupancy[i];
  return CoverageResult::from_occupancy(a.criterion, std::move(occ));
}

CoverageResult surprise_coverage(std::span<const double> sa_values, const BucketConfig& cfg,
                                 std::string criterion) {
  cfg.validate();
  std::vector<bool> occ(cfg.bucket_count, false);
  for (double v : sa_values) {
    if (auto b = cfg.bucket_of(v)) occ[*b] = true;
  }
  return CoverageResult::from_occupancy(std::move(criterion), std::move(occ));
}

CoverageResult neuron_coverage(const TraceSet& traces, double threshold, NcScaling scaling) {
  std::vector<bool> occ(traces.num_neurons(), false);
  for (std::size_t r = 0; r < traces.num_inputs(); ++r) {
    const auto row = traces.row(r);
    for (const LayerSpec& layer : traces.layers()) {
      const auto values = row.subspan(layer.offset, layer.neuron_count);
      double lo = 0.0;
      double span = 0.0;
      if (scaling == NcScaling::kPerInputLayerMinMax) {
        const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        lo = *mn;
        span = *mx - *mn;
      }
      for (std::size_t i = 0; i < values.size(); ++i) {
        double v = values[i];
        if (scaling == NcScaling::kPerInputLayerMinMax) v = span > 0.0 ? (v - lo) / span : 0.0;
        if (v > threshold) occ[layer.offset + i] = true;
      }
    }
  }
  return CoverageResult::from_occupancy("nc", std::move(occ));
}

NeuronRanges ranges_from_profile(const TrainingProfile& profile) {
  return NeuronRanges{profile.min, profile.max};
}

NeuronRanges ranges_from_traces(const TraceSet& traces) {
  if (traces.num_inputs() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot take neuron ranges of an empty trace set");
  }
  NeuronRanges ranges;
  const auto first = traces.row(0);
  ranges.min.assign(first.begin(), first.end());
  ranges.max.assign(first.begin(), first.end());
  for (std::size_t r = 1; r < traces.num_inputs(); ++r) {
    const auto row = traces.row(r);
    for (std::size_t i = 0; i < row.size(); ++i) {
      ranges.min[i] = std::min(ranges.min[i], row[i]);
      ranges.max[i] = std::max(ranges.max[i], row[i]);
    }
  }
  return ranges;
}

CoverageResult kmnc(const NeuronRanges& ranges, const TraceSet& traces, std::size_t k) {
  check_ranges(ranges, traces);
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "KMNC needs k >= 1 sections");
  const std::size_t neurons = ranges.size();
  std::vector<bool> occ(neurons * k, false);
  for (std::size_t r = 0; r < traces.num_inputs(); ++r) {
    const auto row = traces.row(r);
    for (std::size_t i = 0; i < neurons; ++i) {
      if (auto j = section_of(row[i], ranges.min[i], ranges.max[i], k)) occ[i * k + *j] = true;
    }
  }
  return CoverageResult::from_occupancy("kmnc", std::move(occ));
}

std::pair<CoverageResult, CoverageResult> nbc_snac(const NeuronRanges& ranges,
                                                   const TraceSet& traces) {
  check_ranges(ranges, traces);
  const std::size_t neurons = ranges.size();
  std::vector<bool> corners(2 * neurons, false);
  for (std::size_t r = 0; r < traces.num_inputs(); ++r) {
    const auto row = traces.row(r);
    for (std::size_t i = 0; i < neurons; ++i) {
      if (row[i] < ranges.min[i]) corners[2 * i] = true;
      if (row[i] > ranges.max[i]) corners[2 * i + 1] = true;
    }
  }
  std::vector<bool> upper(neurons);
  for (std::size_t i = 0; i < neurons; ++i) upper[i] = corners[2 * i + 1];
  return {CoverageResult::from_occupancy("nbc", std::move(corners)),
          CoverageResult::from_occupancy("snac", std::move(upper))};
}

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::kLsc: return "lsc";
    case Criterion::kDsc: return "dsc";
    case Criterion::kNc: return "nc";
    case Criterion::kKmnc: return "kmnc";
    case Criterion::kNbc: return "nbc";
    case Criterion::kSnac: return "snac";
  }
  return "";
}

std::optional<Criterion> parse_criterion(std::string_view name) {
  for (Criterion c : {Criterion::kLsc, Criterion::kDsc, Criterion::kNc, Criterion::kKmnc,
                      Criterion::kNbc, Criterion::kSnac}) {
    if (criterion_name(c) == name) return c;
  }
  return std::nullopt;
}

bool is_surprise_criterion(Criterion c) { return c == Criterion::kLsc || c == Criterion::kDsc; }

std::vector<CumulativeRow> cumulative_coverage(const std::vector<CoverageStep>& steps,
                                               const CriterionConfig& cfg) {
  const std::string name(criterion_name(cfg.criterion));
  auto step_coverage = [&](const CoverageStep& step) -> CoverageResult {
    if (is_surprise_criterion(cfg.criterion)) {
      const auto* values = std::get_if<std::vector<double>>(&step);
      if (!values) throw Error(ErrorCode::kInvalidArgument, name + " steps must be SA values");
      return surprise_coverage(*values, cfg.buckets, name);
    }
    const auto* traces = std::get_if<TraceSet>(&step);
    if (!traces) throw Error(ErrorCode::kInvalidArgument, name + " steps must be trace sets");
    switch (cfg.criterion) {
      case Criterion::kNc: return neuron_coverage(*traces, cfg.nc_threshold, cfg.nc_scaling);
      case Criterion::kKmnc: return kmnc(cfg.ranges, *traces, cfg.k);
      case Criterion::kNbc: return nbc_snac(cfg.ranges, *traces).first;
      default: return nbc_snac(cfg.ranges, *traces).second;
    }
  };

  std::vector<CumulativeRow> rows;
  std::optional<CoverageResult> running;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    CoverageResult step = step_coverage(steps[i]);
    running = running ? merge(*running, step) : std::move(step);
    rows.push_back(CumulativeRow{i, name, running->covered, running->total, running->ratio});
  }
  return rows;
}

void write_cumulative_csv(std::ostream& out, const std::vector<CumulativeRow>& rows,
                          const std::vector<std::string>& provenance) {
  for (const std::string& line : provenance) out << "# " << line << '\n';
  out << "step,criterion,ratio\n";
  for (const CumulativeRow& r : rows) {
    out << r.step << ',' << r.criterion << ',' << format_double(r.ratio) << '\n';
  }
}

double suggest_upper_bound(std::span<const double> values, double q) {
  std::vector<double> finite;
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) throw Error(ErrorCode::kEmptySelection, "no finite SA values to summarize");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "percentile must be in [0, 1]");
  std::sort(finite.begin(), finite.end());
  const double pos = q * static_cast<double>(finite.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(finite.size() - 1, lo + 1);
  return finite[lo] + (pos - static_cast<double>(lo)) * (finite[hi] - finite[lo]);
}

}  // namespace surprisal
