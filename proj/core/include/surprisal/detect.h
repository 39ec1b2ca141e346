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

#ifndef SURPRISAL_DETECT_H_
#define SURPRISAL_DETECT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "surprisal/trace.h"

namespace surprisal {

// Feature rows (one SA value, or one per layer) with binary labels:
// 1 = adversarial / synthetic, 0 = original.
struct LabeledScores {
  Matrix features;
  std::vector<std::uint8_t> labels;

  static LabeledScores from_scalar(std::span<const double> scores,
                                   std::span<const std::uint8_t> labels);
  std::size_t size() const noexcept { return labels.size(); }
};

struct LogisticModel {
  std::vector<double> weights;  // on standardized features
  double bias = 0.0;
  std::vector<double> feature_mean;
  std::vector<double> feature_scale;

  // w . standardize(x) + b
  double decision(std::span<const double> x) const;
  double probability(std::span<const double> x) const;
};

struct LogisticOptions {
  double l2 = 1e-4;
  int max_iters = 1000;
  double tol = 1e-8;
};

struct LogisticFit {
  LogisticModel model;
  // Objective before the first step and after every accepted step.
  std::vector<double> loss_history;
  int iterations = 0;
  bool converged = false;
};

// Minimizes mean logistic loss + (l2 / 2) |w|^2 (bias unpenalized) on
// standardized features by full-batch gradient descent with Armijo
// backtracking. Deterministic. Throws kSingleClass when one label is
// missing and kNonFinite on NaN/Inf features.
LogisticFit fit_logistic(const LabeledScores& train, const LogisticOptions& options = {});

// Mann-Whitney form of ROC-AUC with midranks for ties: the probability that
// a random positive outscores a random negative, ties counting one half.
double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

struct Rq1Result {
  LogisticModel model;
  double test_auc = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultTrainPerClass = 1000;

// Randomly draws `train_per_class` rows from each set for fitting and
// reports AUC of the classifier's decision value on the remaining rows.
// Each matrix holds one feature row per input. Throws kInsufficientRows
// unless both sets are longer than train_per_class.
Rq1Result rq1_protocol(const Matrix& original, const Matrix& adversarial,
                       std::size_t train_per_class, std::uint64_t seed,
                       const LogisticOptions& options = {});

}  // namespace surprisal

#endif  // SURPRISAL_DETECT_H_
