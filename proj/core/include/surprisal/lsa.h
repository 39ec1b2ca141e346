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

#ifndef SURPRISAL_LSA_H_
#define SURPRISAL_LSA_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surprisal/report.h"
#include "surprisal/trace.h"

namespace surprisal {

inline constexpr double kDefaultVarianceThreshold = 1e-5;

// Per-neuron statistics of the training traces over the selected columns.
// Neurons whose (population) variance does not exceed `threshold` are
// dropped from density estimation.
struct TrainingProfile {
  std::string selector;
  std::vector<std::size_t> columns;  // source columns, one per profiled neuron
  std::vector<double> mean;
  std::vector<double> variance;
  std::vector<double> min;
  std::vector<double> max;
  std::vector<bool> retained;
  double threshold = kDefaultVarianceThreshold;

  std::size_t neuron_count() const noexcept { return columns.size(); }
  std::size_t retained_count() const;
  // Source columns of the retained neurons.
  std::vector<std::size_t> retained_columns() const;
  // Restricts a full-width trace row to the retained neurons.
  std::vector<double> project(std::span<const double> full_row) const;
};

// Throws kNoNeuronsRetained when every neuron is filtered out.
TrainingProfile build_profile(const TraceSet& train, const NeuronSelector& sel,
                              double threshold = kDefaultVarianceThreshold);

// Gaussian kernel density estimate over a fixed set of training traces with
// a full bandwidth matrix H. H is stored through its Cholesky factor L, and
// training rows are kept pre-whitened (L^-1 x_i) so a query costs O(n d)
// after one O(d^2) triangular solve.
class DensityModel {
 public:
  // Scott's rule: H = n^(-2/(d+4)) * Cov, Cov the unbiased sample
  // covariance. If H is not numerically positive definite a ridge
  // eps * I is added to Cov, eps = 1e-12 * trace(Cov) / d, growing tenfold
  // up to 8 times. Needs at least two rows.
  static DensityModel fit(std::optional<ClassLabel> label, Matrix rows);

  // Uses `bandwidth` as given. Throws kFactorizationFailed unless it is
  // positive definite.
  static DensityModel with_bandwidth(std::optional<ClassLabel> label, Matrix rows,
                                     Matrix bandwidth);

  const std::optional<ClassLabel>& label() const noexcept { return label_; }
  std::size_t sample_count() const noexcept { return rows_.rows(); }
  std::size_t dimension() const noexcept { return rows_.cols(); }
  const Matrix& rows() const noexcept { return rows_; }
  const Matrix& bandwidth() const noexcept { return bandwidth_; }
  const Matrix& bandwidth_cholesky() const noexcept { return cholesky_; }
  double log_det_bandwidth() const noexcept { return log_det_; }
  // NaN when the bandwidth was supplied rather than fitted.
  double scott_factor() const noexcept { return scott_factor_; }
  // Ridge added to the covariance; 0 when none was needed.
  double ridge() const noexcept { return ridge_; }

  // log f(x), evaluated entirely in log space.
  double log_density(std::span<const double> x) const;

 private:
  DensityModel() = default;
  void factorize_or_throw(double min_pivot);
  void adopt_factor(Matrix lower);

  std::optional<ClassLabel> label_;
  Matrix rows_;
  Matrix bandwidth_;
  Matrix cholesky_;
  Matrix whitened_;
  double log_det_ = 0.0;
  double scott_factor_ = 0.0;
  double ridge_ = 0.0;
};

// Unbiased sample covariance; sums are order-independent.
Matrix sample_covariance(const Matrix& rows);

// Scott's factor n^(-1/(d+4)).
double scott_factor(std::size_t n, std::size_t d);

// One model per class of `label_source` (ascending label order) when
// `per_class`, else a single unconditioned model. All models share the
// profile's retained neurons. Throws kClassTooSmall naming a class with
// fewer than two rows.
std::vector<DensityModel> fit_kde(const TraceSet& train, const TrainingProfile& profile,
                                  bool per_class,
                                  LabelSource label_source = LabelSource::kPredicted);

// -log f(query). `query` must already be restricted to the retained neurons.
double lsa_score(const DensityModel& model, std::span<const double> query,
                 const TrainingProfile& profile);

enum class QueryClass { kPredicted, kGroundTruth, kUnconditioned };

// Scores every row of `queries` (full-width traces) against the model of its
// class, or the unconditioned model. Rows whose class has no model are
// flagged and the rest still scored.
SurpriseReport lsa_batch(const std::vector<DensityModel>& models, const TraceSet& queries,
                         const TrainingProfile& profile, QueryClass query_class);

}  // namespace surprisal

#endif  // SURPRISAL_LSA_H_
