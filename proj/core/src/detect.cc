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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "surprisal/error.h"
#include "surprisal/rng.h"

namespace surprisal {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

struct Problem {
  const Matrix& x;  // standardized
  std::span<const std::uint8_t> y;
  double l2;

  double loss(std::span<const double> w, double b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double z = std::inner_product(w.begin(), w.end(), x.row(i).begin(), b);
      s += softplus(z) - (y[i] ? z : 0.0);
    }
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return s / static_cast<double>(x.rows()) + 0.5 * l2 * reg;
  }

  // Gradient in (w..., b) order.
  std::vector<double> gradient(std::span<const double> w, double b) const {
    std::vector<double> g(w.size() + 1, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto row = x.row(i);
      const double z = std::inner_product(w.begin(), w.end(), row.begin(), b);
      const double r = sigmoid(z) - (y[i] ? 1.0 : 0.0);
      for (std::size_t k = 0; k < w.size(); ++k) g[k] += r * row[k];
      g.back() += r;
    }
    const double m = static_cast<double>(x.rows());
    for (std::size_t k = 0; k < w.size(); ++k) g[k] = g[k] / m + l2 * w[k];
    g.back() /= m;
    return g;
  }
};

void check_labels(std::span<const std::uint8_t> labels) {
  bool pos = false;
  bool neg = false;
  for (std::uint8_t l : labels) (l ? pos : neg) = true;
  if (!pos || !neg) {
    throw Error(ErrorCode::kSingleClass, "both positive and negative examples are required");
  }
}

Matrix take_rows(const Matrix& m, std::span<const std::size_t> ids) {
  Matrix out(ids.size(), m.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::copy(m.row(ids[i]).begin(), m.row(ids[i]).end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

LabeledScores LabeledScores::from_scalar(std::span<const double> scores,
                                         std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLabelLengthMismatch, "scores and labels differ in length");
  }
  LabeledScores s;
  s.features = Matrix(scores.size(), 1, std::vector<double>(scores.begin(), scores.end()));
  s.labels.assign(labels.begin(), labels.end());
  return s;
}

double LogisticModel::decision(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature row has " + std::to_string(x.size()) + " values, model expects " +
                    std::to_string(weights.size()));
  }
  double z = bias;
  for (std::size_t k = 0; k < x.size(); ++k) {
    z += weights[k] * (x[k] - feature_mean[k]) / feature_scale[k];
  }
  return z;
}

double LogisticModel::probability(std::span<const double> x) const { return sigmoid(decision(x)); }

LogisticFit fit_logistic(const LabeledScores& train, const LogisticOptions& options) {
  const Matrix& raw = train.features;
  if (raw.rows() != train.labels.size()) {
    throw Error(ErrorCode::kLabelLengthMismatch, "feature rows and labels differ in length");
  }
  for (double v : raw.data()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFinite, "non-finite feature value");
  }
  check_labels(train.labels);

  const std::size_t m = raw.rows();
  const std::size_t d = raw.cols();
  LogisticFit fit;
  LogisticModel& model = fit.model;
  model.weights.assign(d, 0.0);
  model.feature_mean.assign(d, 0.0);
  model.feature_scale.assign(d, 1.0);
  for (std::size_t k = 0; k < d; ++k) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += raw(i, k);
    mean /= static_cast<double>(m);
    double var = 0.0;
    for (std::size_t i = 0; i < m; ++i) var += (raw(i, k) - mean) * (raw(i, k) - mean);
    const double sd = std::sqrt(var / static_cast<double>(m));
    model.feature_mean[k] = mean;
    model.feature_scale[k] = sd > 0.0 ? sd : 1.0;
  }
  Matrix x(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      x(i, k) = (raw(i, k) - model.feature_mean[k]) / model.feature_scale[k];
    }
  }

  const Problem problem{x, train.labels, options.l2};
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  double loss = problem.loss(w, b);
  fit.loss_history.push_back(loss);
  double step = 1.0;

  for (int it = 0; it < options.max_iters; ++it) {
    const std::vector<double> g = problem.gradient(w, b);
    double g2 = 0.0;
    for (double v : g) g2 += v * v;
    if (std::sqrt(g2) < options.tol) {
      fit.converged = true;
      break;
    }
    bool accepted = false;
    std::vector<double> w_new(d);
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      for (std::size_t k = 0; k < d; ++k) w_new[k] = w[k] - step * g[k];
      const double b_new = b - step * g.back();
      const double loss_new = problem.loss(w_new, b_new);
      if (loss_new <= loss - kArmijo * step * g2) {
        w = w_new;
        b = b_new;
        loss = loss_new;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    fit.iterations = it + 1;
    if (!accepted) break;
    fit.loss_history.push_back(loss);
    step = std::min(step * 2.0, 1e6);
  }
  if (!fit.converged) {
    const std::vector<double> g = problem.gradient(w, b);
    double g2 = 0.0;
    for (double v : g) g2 += v * v;
    fit.converged = std::sqrt(g2) < options.tol;
  }
  model.weights = std::move(w);
  model.bias = b;
  return fit;
}

double roc_auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kLabelLengthMismatch, "scores and labels differ in length");
  }
  for (double s : scores) {
    if (std::isnan(s)) throw Error(ErrorCode::kNonFinite, "NaN score");
  }
  check_labels(labels);

  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Twice the midrank keeps every rank an integer.
  double pos_rank2 = 0.0;
  double n_pos = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double rank2 = static_cast<double>(i + 1 + j);  // 2 * mean of ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]]) {
        pos_rank2 += rank2;
        n_pos += 1.0;
      }
    }
    i = j;
  }
  const double n_neg = static_cast<double>(n) - n_pos;
  const double u2 = pos_rank2 - n_pos * (n_pos + 1.0);
  return u2 / (2.0 * n_pos * n_neg);
}

Rq1Result rq1_protocol(const Matrix& original, const Matrix& adversarial,
                       std::size_t train_per_class, std::uint64_t seed,
                       const LogisticOptions& options) {
  if (original.cols() != adversarial.cols() || original.cols() == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "original and adversarial features differ in width");
  }
  if (original.rows() <= train_per_class || adversarial.rows() <= train_per_class) {
    throw Error(ErrorCode::kInsufficientRows,
                "need more than " + std::to_string(train_per_class) +
                    " rows per set, got " + std::to_string(original.rows()) + " original and " +
                    std::to_string(adversarial.rows()) + " adversarial");
  }
  if (train_per_class == 0) {
    throw Error(ErrorCode::kInsufficientRows, "train_per_class must be at least 1");
  }

  auto split = [&](const Matrix& m, std::uint64_t stream) {
    std::vector<std::size_t> ids(m.rows());
    std::iota(ids.begin(), ids.end(), 0);
    Rng rng(mix_seed(seed, stream));
    rng.shuffle(std::span<std::size_t>(ids));
    return ids;
  };
  const std::vector<std::size_t> orig_ids = split(original, 0);
  const std::vector<std::size_t> adv_ids = split(adversarial, 1);
  const std::span<const std::size_t> orig_span(orig_ids);
  const std::span<const std::size_t> adv_span(adv_ids);

  auto stack = [&](std::span<const std::size_t> a, std::span<const std::size_t> b) {
    const Matrix top = take_rows(original, a);
    const Matrix bottom = take_rows(adversarial, b);
    std::vector<double> data(top.data().begin(), top.data().end());
    data.insert(data.end(), bottom.data().begin(), bottom.data().end());
    LabeledScores s;
    s.features = Matrix(a.size() + b.size(), original.cols(), std::move(data));
    s.labels.assign(a.size(), 0);
    s.labels.insert(s.labels.end(), b.size(), 1);
    return s;
  };

  const LabeledScores train =
      stack(orig_span.first(train_per_class), adv_span.first(train_per_class));
  const LabeledScores test =
      stack(orig_span.subspan(train_per_class), adv_span.subspan(train_per_class));

  Rq1Result result;
  result.model = fit_logistic(train, options).model;
  std::vector<double> decision(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    decision[i] = result.model.decision(test.features.row(i));
  }
  result.test_auc = roc_auc(decision, test.labels);
  result.n_train = train.size();
  result.n_test = test.size();
  result.seed = seed;
  return result;
}

}  // namespace surprisal
