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

#include "surprisal/detect.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "generators.h"
#include "oracles.h"
#include "test_util.h"

namespace surprisal {
namespace {

using testing::code_of;

std::vector<std::uint8_t> random_labels(Rng& rng, std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (auto& l : out) l = static_cast<std::uint8_t>(rng.uniform_index(2));
  out[0] = 0;
  out[n - 1] = 1;
  return out;
}

TEST(RocAucTest, Examples) {
  const std::vector<double> s = {0.1, 0.4, 0.35, 0.8};
  const std::vector<std::uint8_t> l = {0, 0, 1, 1};
  EXPECT_EQ(roc_auc(s, l), 0.75);

  const std::vector<double> sep = {1, 2, 3, 4};
  EXPECT_EQ(roc_auc(sep, l), 1.0);

  const std::vector<double> flat = {5, 5, 5, 5};
  EXPECT_EQ(roc_auc(flat, l), 0.5);
}

TEST(RocAucTest, Errors) {
  const std::vector<double> s = {1, 2};
  const std::vector<std::uint8_t> one_class = {1, 1};
  const std::vector<std::uint8_t> short_labels = {1};
  const std::vector<double> nan = {1, std::numeric_limits<double>::quiet_NaN()};
  const std::vector<std::uint8_t> l = {0, 1};
  EXPECT_EQ(code_of([&] { roc_auc(s, one_class); }), ErrorCode::kSingleClass);
  EXPECT_EQ(code_of([&] { roc_auc(s, short_labels); }), ErrorCode::kLabelLengthMismatch);
  EXPECT_EQ(code_of([&] { roc_auc(nan, l); }), ErrorCode::kNonFinite);
}

TEST(RocAucProperty, MatchesPairwiseCount) {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen::between(rng, 2, 2000);
    const auto labels = random_labels(rng, n);
    std::vector<double> scores(n);
    const bool coarse = trial % 2 == 0;
    for (double& s : scores) {
      s = coarse ? static_cast<double>(rng.uniform_index(5)) : rng.normal();
    }
    EXPECT_NEAR(roc_auc(scores, labels), oracle::pairwise_auc(scores, labels), 1e-12);
  }
}

TEST(RocAucProperty, FlipAndMonotoneTransform) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = gen::between(rng, 2, 300);
    const auto labels = random_labels(rng, n);
    std::vector<double> scores(n);
    for (double& s : scores) s = static_cast<double>(rng.uniform_index(20)) / 4.0;

    std::vector<std::uint8_t> flipped(labels);
    for (auto& l : flipped) l = 1 - l;
    EXPECT_NEAR(roc_auc(scores, labels) + roc_auc(scores, flipped), 1.0, 1e-12);

    // exp and an affine map are strictly increasing, so the ranking and
    // the tie structure are unchanged.
    std::vector<double> mapped(n);
    for (std::size_t i = 0; i < n; ++i) mapped[i] = 3.0 * std::exp(scores[i]) - 7.0;
    EXPECT_EQ(roc_auc(mapped, labels), roc_auc(scores, labels));
  }
}

TEST(LogisticTest, SeparableOneDimensional) {
  const std::vector<double> s = {-3, -2, -1, 1, 2, 3};
  const std::vector<std::uint8_t> l = {0, 0, 0, 1, 1, 1};
  const LogisticFit fit = fit_logistic(LabeledScores::from_scalar(s, l));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double x[] = {s[i]};
    EXPECT_EQ(fit.model.decision(x) > 0.0, l[i] == 1) << "row " << i;
  }
  EXPECT_GT(fit.model.weights[0], 0.0);
}

TEST(LogisticTest, SymmetricDataHasZeroBias) {
  // Labels mirror the scores around zero, so the optimum passes through it.
  const std::vector<double> s = {-2, -1, -0.5, 0.5, 1, 2};
  const std::vector<std::uint8_t> l = {0, 0, 0, 1, 1, 1};
  const LogisticFit fit = fit_logistic(LabeledScores::from_scalar(s, l));
  EXPECT_LT(std::abs(fit.model.bias), 1e-6);
}

TEST(LogisticTest, SingleClassAndNonFiniteRejected) {
  const std::vector<double> s = {1, 2, 3};
  const std::vector<std::uint8_t> zeros = {0, 0, 0};
  EXPECT_EQ(code_of([&] { fit_logistic(LabeledScores::from_scalar(s, zeros)); }),
            ErrorCode::kSingleClass);
  const std::vector<double> inf = {1, std::numeric_limits<double>::infinity(), 3};
  const std::vector<std::uint8_t> l = {0, 1, 1};
  EXPECT_EQ(code_of([&] { fit_logistic(LabeledScores::from_scalar(inf, l)); }),
            ErrorCode::kNonFinite);
}

TEST(LogisticProperty, LossNeverIncreases) {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = gen::between(rng, 4, 200);
    const std::size_t d = gen::between(rng, 1, 4);
    LabeledScores data;
    data.features = gen::normal_matrix(rng, n, d, 1.0 + rng.uniform01() * 10.0);
    data.labels = random_labels(rng, n);
    for (std::size_t i = 0; i < n; ++i) {
      if (data.labels[i]) data.features(i, 0) += 1.0;
    }
    const LogisticFit fit = fit_logistic(data);
    ASSERT_FALSE(fit.loss_history.empty());
    for (std::size_t i = 1; i < fit.loss_history.size(); ++i) {
      EXPECT_LE(fit.loss_history[i], fit.loss_history[i - 1]);
    }
    EXPECT_EQ(fit_logistic(data).model.weights, fit.model.weights);
  }
}

Matrix column(Rng& rng, std::size_t n, double mean) {
  return gen::normal_matrix(rng, n, 1, 1.0, mean);
}

TEST(DetectionProtocolTest, SeparatedDistributions) {
  Rng rng(13);
  const Matrix a = column(rng, 1500, 0.0);
  const Matrix b = column(rng, 1500, 6.0);
  const Rq1Result r = rq1_protocol(a, b, kDefaultTrainPerClass, 7);
  EXPECT_GT(r.test_auc, 0.99);
  EXPECT_EQ(r.n_train, 2000u);
  EXPECT_EQ(r.n_test, 1000u);
  EXPECT_EQ(r.seed, 7u);

  const Rq1Result again = rq1_protocol(a, b, kDefaultTrainPerClass, 7);
  EXPECT_EQ(again.test_auc, r.test_auc);
  EXPECT_EQ(again.model.weights, r.model.weights);
  EXPECT_EQ(again.model.bias, r.model.bias);
}

TEST(DetectionProtocolTest, UnequalSetSizes) {
  Rng rng(14);
  const Rq1Result r = rq1_protocol(column(rng, 30, 0.0), column(rng, 50, 1.0), 10, 1);
  EXPECT_EQ(r.n_train, 20u);
  EXPECT_EQ(r.n_test, 60u);
}

TEST(DetectionProtocolTest, InsufficientRows) {
  Rng rng(15);
  const Matrix a = column(rng, 10, 0.0);
  const Matrix b = column(rng, 11, 0.0);
  EXPECT_EQ(code_of([&] { rq1_protocol(a, b, 10, 0); }), ErrorCode::kInsufficientRows);
  EXPECT_EQ(code_of([&] { rq1_protocol(b, b, 0, 0); }), ErrorCode::kInsufficientRows);
  EXPECT_EQ(code_of([&] { rq1_protocol(b, gen::normal_matrix(rng, 20, 2), 5, 0); }),
            ErrorCode::kDimensionMismatch);
}

}  // namespace
}  // namespace surprisal
