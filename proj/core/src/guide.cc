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

#include "surprisal/guide.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <nlohmann/json.hpp>

#include "surprisal/error.h"
#include "surprisal/rng.h"

namespace surprisal {

RangeSample sample_by_range(const SurpriseReport& report, const SaRange& range,
                            std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(ErrorCode::kInvalidArgument, "sample count must be at least 1");
  if (!(range.low <= range.high)) {
    throw Error(ErrorCode::kInvalidArgument, "range low exceeds high");
  }
  std::vector<std::size_t> qualifying;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const SurpriseEntry& e = report.entries[i];
    if (e.ok() && e.value >= range.low && e.value <= range.high) qualifying.push_back(i);
  }
  if (qualifying.empty()) {
    throw Error(ErrorCode::kEmptySelection,
                "no input has SA in [" + format_double(range.low) + ", " +
                    format_double(range.high) + "]");
  }

  RangeSample out;
  out.range = range;
  out.qualifying = qualifying.size();
  out.shortfall = qualifying.size() < count;
  const std::size_t take = std::min(count, qualifying.size());

  Rng rng(seed);
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(qualifying.size() - i));
    std::swap(qualifying[i], qualifying[j]);
  }
  qualifying.resize(take);
  std::sort(qualifying.begin(), qualifying.end());
  for (std::size_t i : qualifying) out.ids.push_back(report.entries[i].id);
  return out;
}

std::vector<RangeSample> four_range_plan(const SurpriseReport& report, double upper_bound,
                                         std::size_t count, std::uint64_t seed) {
  if (!(upper_bound > 0.0) || !std::isfinite(upper_bound)) {
    throw Error(ErrorCode::kInvalidArgument,
                "upper bound U must be positive and finite, got " + format_double(upper_bound));
  }
  std::vector<RangeSample> plan;
  for (int quarter = 1; quarter <= 4; ++quarter) {
    SaRange range{0.0, upper_bound * quarter / 4.0, std::to_string(quarter) + "/4"};
    try {
      plan.push_back(sample_by_range(report, range, count, mix_seed(seed, quarter)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptySelection) throw;
      RangeSample failed;
      failed.range = range;
      failed.error = std::string(error_code_name(e.code())) + ": " + e.what();
      plan.push_back(std::move(failed));
    }
  }
  return plan;
}

std::string range_plan_to_json(const std::vector<RangeSample>& plan,
                               const std::vector<std::string>& provenance) {
  nlohmann::json j;
  j["provenance"] = provenance;
  j["ranges"] = nlohmann::json::array();
  for (const RangeSample& s : plan) {
    nlohmann::json r;
    r["range_label"] = s.range.label;
    r["low"] = s.range.low;
    r["high"] = s.range.high;
    r["ids"] = s.ids;
    r["qualifying"] = s.qualifying;
    r["shortfall"] = s.shortfall;
    if (!s.error.empty()) r["error"] = s.error;
    j["ranges"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string_view curve_direction_name(CurveDirection d) {
  switch (d) {
    case CurveDirection::kAscending: return "ascending";
    case CurveDirection::kDescending: return "descending";
    case CurveDirection::kRandom: return "random";
  }
  return "";
}

std::vector<CurvePoint> sa_order_curve(const SurpriseReport& report,
                                       std::span<const std::uint8_t> correct,
                                       CurveDirection direction, std::size_t steps,
                                       std::uint64_t seed) {
  if (correct.size() != report.entries.size()) {
    throw Error(ErrorCode::kLabelLengthMismatch,
                "correctness list has " + std::to_string(correct.size()) + " entries for " +
                    std::to_string(report.entries.size()) + " report rows");
  }
  if (steps == 0) throw Error(ErrorCode::kInvalidArgument, "curve needs at least one step");

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    if (report.entries[i].ok()) rows.push_back(i);
  }
  const std::size_t n = rows.size();
  if (n == 0) throw Error(ErrorCode::kEmptySelection, "report has no scored rows");

  auto prefix_size = [&](std::size_t step) { return (step * n + steps - 1) / steps; };
  std::vector<CurvePoint> curve(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    curve[s].fraction = static_cast<double>(s + 1) / static_cast<double>(steps);
    curve[s].included = prefix_size(s + 1);
  }

  auto accumulate_order = [&](const std::vector<std::size_t>& order, double weight) {
    std::size_t hits = 0;
    std::size_t taken = 0;
    for (CurvePoint& p : curve) {
      while (taken < p.included) hits += correct[order[taken++]] ? 1 : 0;
      p.accuracy += weight * static_cast<double>(hits) / static_cast<double>(p.included);
    }
  };

  if (direction == CurveDirection::kRandom) {
    for (int rep = 0; rep < kRandomCurveRepetitions; ++rep) {
      std::vector<std::size_t> order = rows;
      Rng rng(mix_seed(seed, static_cast<std::uint64_t>(rep)));
      rng.shuffle(std::span<std::size_t>(order));
      accumulate_order(order, 1.0);
    }
    for (CurvePoint& p : curve) p.accuracy /= kRandomCurveRepetitions;
    // The full set is order-independent; pin it to the exact overall value.
    std::size_t hits = 0;
    for (std::size_t r : rows) hits += correct[r] ? 1 : 0;
    if (curve.back().included == n) {
      curve.back().accuracy = static_cast<double>(hits) / static_cast<double>(n);
    }
    return curve;
  }

  std::vector<std::size_t> order = rows;
  const bool ascending = direction == CurveDirection::kAscending;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = report.entries[a].value;
    const double vb = report.entries[b].value;
    return ascending ? va < vb : va > vb;
  });
  accumulate_order(order, 1.0);
  return curve;
}

void write_curve_csv(std::ostream& out, CurveDirection direction,
                     const std::vector<CurvePoint>& curve, bool header) {
  if (header) out << "direction,fraction,included,accuracy\n";
  for (const CurvePoint& p : curve) {
    out << curve_direction_name(direction) << ',' << format_double(p.fraction) << ','
        << p.included << ',' << format_double(p.accuracy) << '\n';
  }
}

}  // namespace surprisal
