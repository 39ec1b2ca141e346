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

#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "generators.h"
#include "oracles.h"
#include "test_util.h"

namespace surprisal {
namespace {

using testing::code_of;

TraceSet one_layer(Matrix m) { return TraceSet::single_layer(std::move(m)); }

TEST(SurpriseCoverageTest, Examples) {
  const BucketConfig cfg{2.0, 2};
  const std::vector<double> both = {0.5, 1.5};
  EXPECT_EQ(surprise_coverage(both, cfg).ratio, 1.0);
  const std::vector<double> above = {2.5};
  EXPECT_EQ(surprise_coverage(above, cfg).ratio, 0.0);
  EXPECT_EQ(surprise_coverage(std::vector<double>{}, cfg).ratio, 0.0);
}

TEST(SurpriseCoverageTest, BucketEdges) {
  const BucketConfig cfg{2.0, 4};
  EXPECT_EQ(cfg.bucket_of(0.0), std::nullopt);
  EXPECT_EQ(cfg.bucket_of(-1.0), std::nullopt);
  EXPECT_EQ(cfg.bucket_of(std::numeric_limits<double>::quiet_NaN()), std::nullopt);
  EXPECT_EQ(cfg.bucket_of(0.5), 0u);  // right edge of bucket 1 is inclusive
  EXPECT_EQ(cfg.bucket_of(std::nextafter(0.5, 1.0)), 1u);
  EXPECT_EQ(cfg.bucket_of(2.0), 3u);
  EXPECT_EQ(cfg.bucket_of(std::nextafter(2.0, 3.0)), std::nullopt);
  EXPECT_EQ(cfg.edge(0), 0.0);
  EXPECT_EQ(cfg.edge(4), 2.0);
}

TEST(SurpriseCoverageTest, LargeBucketCounts) {
  // Typical image-classifier settings: LSC with n=1000, U=2000 and DSC with
  // n=1000, U=2.0.
  const BucketConfig lsc{2000.0, 1000};
  const BucketConfig dsc{2.0, 1000};
  EXPECT_EQ(lsc.bucket_of(2000.0), 999u);
  EXPECT_EQ(lsc.bucket_of(1.0), 0u);
  EXPECT_EQ(dsc.bucket_of(0.0015), 0u);
  EXPECT_EQ(dsc.bucket_of(0.0025), 1u);
}

TEST(SurpriseCoverageTest, InvalidConfig) {
  const std::vector<double> v = {1.0};
  EXPECT_EQ(code_of([&] { surprise_coverage(v, BucketConfig{0.0, 10}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { surprise_coverage(v, BucketConfig{1.0, 0}); }),
            ErrorCode::kInvalidArgument);
}

TEST(SurpriseCoverageProperty, MatchesBruteForceAndSingleInputBound) {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const double upper = std::exp(3.0 * rng.normal());
    const std::size_t n = gen::between(rng, 1, 50);
    std::vector<double> values(gen::between(rng, 0, 30));
    for (double& v : values) {
      // Mix of exact edges, values near edges and random values in and out.
      switch (rng.uniform_index(3)) {
        case 0:
          v = upper * (static_cast<double>(rng.uniform_index(n + 1)) / static_cast<double>(n));
          break;
        case 1:
          v = std::nextafter(upper * (static_cast<double>(rng.uniform_index(n + 1)) /
                                      static_cast<double>(n)),
                             rng.uniform_index(2) ? 1e300 : -1e300);
          break;
        default:
          v = upper * (1.4 * rng.uniform01() - 0.2);
      }
    }
    const BucketConfig cfg{upper, n};
    const CoverageResult got = surprise_coverage(values, cfg);
    EXPECT_EQ(got.occupancy, oracle::brute_sc(values, upper, n));

    std::vector<double> dup = values;
    dup.insert(dup.end(), values.begin(), values.end());
    EXPECT_EQ(surprise_coverage(dup, cfg).occupancy, got.occupancy);

    std::vector<double> one_more = values;
    one_more.push_back(upper * rng.uniform01());
    const double step = surprise_coverage(one_more, cfg).ratio - got.ratio;
    EXPECT_GE(step, 0.0);
    EXPECT_LE(step, 1.0 / static_cast<double>(n) + 1e-15);
  }
}

TEST(NeuronCoverageTest, Examples) {
  EXPECT_EQ(neuron_coverage(one_layer(Matrix(1, 3, 1.0)), 0.5, NcScaling::kRaw).ratio, 1.0);
  EXPECT_EQ(neuron_coverage(one_layer(Matrix(2, 3, 0.0)), 0.5).ratio, 0.0);
  EXPECT_EQ(neuron_coverage(one_layer(Matrix(2, 3, 0.0)), 0.5, NcScaling::kRaw).ratio, 0.0);
  EXPECT_EQ(neuron_coverage(one_layer(Matrix(1, 2, std::vector<double>{0.2, 0.8})), 0.5).ratio,
            0.5);
  EXPECT_EQ(neuron_coverage(one_layer(Matrix(0, 4))).ratio, 0.0);
  EXPECT_EQ(kDefaultNcThreshold, 0.5);
}

TEST(NeuronCoverageTest, ScalingIsPerLayer) {
  const TraceSet t(Matrix(1, 4, std::vector<double>{0.0, 1.0, 100.0, 101.0}), gen::layout({2, 2}));
  const CoverageResult r = neuron_coverage(t, 0.5);
  EXPECT_EQ(r.occupancy, (std::vector<bool>{false, true, false, true}));
}

TEST(KmncTest, Examples) {
  const NeuronRanges ranges{{0.0}, {1.0}};
  EXPECT_EQ(kmnc(ranges, one_layer(Matrix(1, 1, std::vector<double>{0.25})), 2).ratio, 0.5);
  EXPECT_EQ(kmnc(ranges, one_layer(Matrix(1, 1, std::vector<double>{1.5})), 2).ratio, 0.0);
  EXPECT_EQ(kmnc(ranges, one_layer(Matrix(1, 1, std::vector<double>{1.0})), 2).occupancy,
            (std::vector<bool>{false, true}));
  EXPECT_EQ(kmnc(ranges, one_layer(Matrix(1, 1, std::vector<double>{0.5})), 2).occupancy,
            (std::vector<bool>{false, true}));
  EXPECT_EQ(kDefaultKmncSections, 1000u);
  EXPECT_EQ(code_of([&] { kmnc(ranges, one_layer(Matrix(1, 2)), 2); }),
            ErrorCode::kDimensionMismatch);
}

TEST(KmncTest, ZeroWidthRange) {
  const NeuronRanges ranges{{0.3}, {0.3}};
  EXPECT_EQ(kmnc(ranges, one_layer(Matrix(1, 1, std::vector<double>{0.3})), 4).covered, 1u);
  EXPECT_EQ(kmnc(ranges, one_layer(Matrix(1, 1, std::vector<double>{0.31})), 4).covered, 0u);
}

TEST(CornerTest, Examples) {
  const NeuronRanges one{{0.0}, {1.0}};
  const auto inside = nbc_snac(one, one_layer(Matrix(2, 1, std::vector<double>{0.0, 1.0})));
  EXPECT_EQ(inside.first.ratio, 0.0);
  EXPECT_EQ(inside.second.ratio, 0.0);
  const auto above = nbc_snac(one, one_layer(Matrix(1, 1, std::vector<double>{2.0})));
  EXPECT_EQ(above.first.ratio, 0.5);
  EXPECT_EQ(above.second.ratio, 1.0);

  const NeuronRanges two{{0.0, 0.0}, {1.0, 1.0}};
  const auto mixed = nbc_snac(two, one_layer(Matrix(1, 2, std::vector<double>{3.0, -3.0})));
  EXPECT_EQ(mixed.first.ratio, 0.5);
  EXPECT_EQ(mixed.second.ratio, 0.5);
}

TEST(RangesTest, FromTracesAndProfileAgree) {
  Rng rng(2);
  const TraceSet t = one_layer(gen::normal_matrix(rng, 30, 4));
  const NeuronRanges a = ranges_from_traces(t);
  const NeuronRanges b = ranges_from_profile(build_profile(t, NeuronSelector::all()));
  EXPECT_EQ(a.min, b.min);
  EXPECT_EQ(a.max, b.max);
  EXPECT_EQ(code_of([] { ranges_from_traces(one_layer(Matrix(0, 2))); }),
            ErrorCode::kInvalidArgument);
}

TEST(NeuronCriteriaProperty, MatchBruteForceAndGrowUnderUnion) {
  Rng rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t widths_a = gen::between(rng, 1, 4);
    const std::size_t widths_b = gen::between(rng, 1, 4);
    const std::size_t d = widths_a + widths_b;
    const bool grid = trial % 2 == 0;
    const Matrix train = grid ? gen::grid_matrix(rng, gen::between(rng, 1, 12), d, 5)
                              : gen::normal_matrix(rng, gen::between(rng, 1, 12), d);
    const Matrix test = grid ? gen::grid_matrix(rng, gen::between(rng, 0, 15), d, 7)
                             : gen::normal_matrix(rng, gen::between(rng, 0, 15), d, 1.5);
    const TraceSet tt(test, gen::layout({widths_a, widths_b}));
    const std::size_t k = gen::between(rng, 1, 9);
    const double th = rng.uniform01();

    std::vector<double> lo;
    std::vector<double> hi;
    oracle::column_ranges(train, lo, hi);
    const NeuronRanges ranges{lo, hi};

    for (bool minmax : {true, false}) {
      EXPECT_EQ(neuron_coverage(tt, th, minmax ? NcScaling::kPerInputLayerMinMax : NcScaling::kRaw)
                    .occupancy,
                oracle::brute_nc(tt, th, minmax));
    }
    EXPECT_EQ(kmnc(ranges, tt, k).occupancy, oracle::brute_kmnc(lo, hi, test, k));
    const auto corners = oracle::brute_corners(lo, hi, test);
    const auto [nbc, snac] = nbc_snac(ranges, tt);
    EXPECT_EQ(nbc.occupancy, corners);
    std::size_t upper = 0;
    for (std::size_t i = 0; i < lo.size(); ++i) upper += corners[2 * i + 1] ? 1 : 0;
    EXPECT_EQ(snac.covered, upper);
    EXPECT_EQ(snac.total, lo.size());

    // Monotone under union: coverage of a prefix never exceeds the whole.
    if (test.rows() > 0) {
      const std::size_t cut = gen::between(rng, 0, test.rows());
      Matrix prefix(cut, d);
      for (std::size_t r = 0; r < cut; ++r) {
        for (std::size_t c = 0; c < d; ++c) prefix(r, c) = test(r, c);
      }
      const TraceSet pt(prefix, gen::layout({widths_a, widths_b}));
      EXPECT_LE(neuron_coverage(pt, th).ratio, neuron_coverage(tt, th).ratio);
      EXPECT_LE(kmnc(ranges, pt, k).ratio, kmnc(ranges, tt, k).ratio);
      EXPECT_LE(nbc_snac(ranges, pt).first.ratio, nbc.ratio);
      EXPECT_LE(nbc_snac(ranges, pt).second.ratio, snac.ratio);
    }
  }
}

TEST(CumulativeTest, IdenticalStepsGiveConstantRatios) {
  CriterionConfig cfg;
  cfg.criterion = Criterion::kLsc;
  cfg.buckets = BucketConfig{10.0, 10};
  const std::vector<double> values = {1.5, 2.5, 9.0};
  const auto rows = cumulative_coverage({values, values, values}, cfg);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_EQ(r.ratio, 0.3);
  EXPECT_EQ(rows[2].step, 2u);
  EXPECT_EQ(rows[0].criterion, "lsc");
}

TEST(CumulativeTest, EmptyFirstStepGivesZero) {
  CriterionConfig cfg;
  cfg.criterion = Criterion::kNc;
  const auto rows =
      cumulative_coverage({one_layer(Matrix(0, 3)), one_layer(Matrix(1, 3, std::vector<double>{0, 1, 0.2}))},
                          cfg);
  EXPECT_EQ(rows[0].ratio, 0.0);
  EXPECT_NEAR(rows[1].ratio, 1.0 / 3.0, 1e-15);
}

TEST(CumulativeTest, KindMismatchIsRejected) {
  CriterionConfig cfg;
  cfg.criterion = Criterion::kDsc;
  cfg.buckets = BucketConfig{2.0, 4};
  EXPECT_EQ(code_of([&] { cumulative_coverage({one_layer(Matrix(1, 1))}, cfg); }),
            ErrorCode::kInvalidArgument);
}

TEST(CumulativeProperty, NonDecreasingForEveryCriterion) {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix train = gen::normal_matrix(rng, 10, 3);
    CriterionConfig cfg;
    cfg.criterion = static_cast<Criterion>(rng.uniform_index(6));
    cfg.buckets = BucketConfig{3.0, gen::between(rng, 1, 20)};
    cfg.k = gen::between(rng, 1, 10);
    cfg.ranges = ranges_from_traces(one_layer(train));
    std::vector<CoverageStep> steps;
    for (std::size_t s = 0; s < gen::between(rng, 1, 6); ++s) {
      if (is_surprise_criterion(cfg.criterion)) {
        std::vector<double> v(gen::between(rng, 0, 5));
        for (double& x : v) x = 4.0 * rng.uniform01();
        steps.emplace_back(v);
      } else {
        steps.emplace_back(one_layer(gen::normal_matrix(rng, gen::between(rng, 0, 4), 3, 2.0)));
      }
    }
    const auto rows = cumulative_coverage(steps, cfg);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      EXPECT_GE(rows[i].ratio, 0.0);
      EXPECT_LE(rows[i].ratio, 1.0);
      if (i > 0) EXPECT_GE(rows[i].ratio, rows[i - 1].ratio);
    }
  }
}

TEST(CumulativeTest, CsvLayout) {
  std::ostringstream out;
  write_cumulative_csv(out, {{0, "dsc", 1, 4, 0.25}, {1, "dsc", 3, 4, 0.75}}, {"criterion=dsc"});
  EXPECT_EQ(out.str(), "# criterion=dsc\nstep,criterion,ratio\n0,dsc,0.25\n1,dsc,0.75\n");
}

TEST(CriterionTest, NamesRoundTrip) {
  for (Criterion c : {Criterion::kLsc, Criterion::kDsc, Criterion::kNc, Criterion::kKmnc,
                      Criterion::kNbc, Criterion::kSnac}) {
    EXPECT_EQ(parse_criterion(criterion_name(c)), c);
  }
  EXPECT_EQ(parse_criterion("tknc"), std::nullopt);
  EXPECT_TRUE(is_surprise_criterion(Criterion::kDsc));
  EXPECT_FALSE(is_surprise_criterion(Criterion::kSnac));
}

TEST(SuggestUpperBoundTest, Percentiles) {
  std::vector<double> v = {4.0, 1.0, 3.0, 2.0, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_EQ(suggest_upper_bound(v, 1.0), 4.0);
  EXPECT_EQ(suggest_upper_bound(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(suggest_upper_bound(v, 0.5), 2.5);
}

}  // namespace
}  // namespace surprisal
