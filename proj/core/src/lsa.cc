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

#include "surprisal/lsa.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "surprisal/error.h"
#include "surprisal/numeric.h"
#include "surprisal/parallel.h"

namespace surprisal {
namespace {

constexpr double kRidgeBase = 1e-12;
constexpr int kRidgeEscalations = 8;
// Pivots below this fraction of the mean diagonal count as singular.
constexpr double kRelativePivotFloor = 1e-14;

std::string class_name(const std::optional<ClassLabel>& label) {
  return label ? "class " + std::to_string(label->value) : "unconditioned model";
}

}  // namespace

std::size_t TrainingProfile::retained_count() const {
  return static_cast<std::size_t>(std::count(retained.begin(), retained.end(), true));
}

std::vector<std::size_t> TrainingProfile::retained_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (retained[i]) out.push_back(columns[i]);
  }
  return out;
}

std::vector<double> TrainingProfile::project(std::span<const double> full_row) const {
  std::vector<double> out;
  out.reserve(columns.size());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (retained[i]) out.push_back(full_row[columns[i]]);
  }
  return out;
}

TrainingProfile build_profile(const TraceSet& train, const NeuronSelector& sel,
                              double threshold) {
  if (train.num_inputs() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "cannot profile an empty training set");
  }
  TrainingProfile p;
  p.selector = sel.describe();
  p.columns = sel.resolve(train);
  p.threshold = threshold;

  const std::size_t n = train.num_inputs();
  const std::size_t d = p.columns.size();
  p.mean.resize(d);
  p.variance.resize(d);
  p.min.resize(d);
  p.max.resize(d);
  p.retained.resize(d);

  std::vector<double> column(n);
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t c = p.columns[j];
    for (std::size_t r = 0; r < n; ++r) column[r] = train.row(r)[c];
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    p.min[j] = *lo;
    p.max[j] = *hi;
    const double mean = std::clamp(ordered_sum(column) / static_cast<double>(n), p.min[j], p.max[j]);
    for (std::size_t r = 0; r < n; ++r) {
      const double dev = train.row(r)[c] - mean;
      column[r] = dev * dev;
    }
    p.mean[j] = mean;
    p.variance[j] = ordered_sum(column) / static_cast<double>(n);
    p.retained[j] = p.variance[j] > threshold;
  }
  if (p.retained_count() == 0) {
    throw Error(ErrorCode::kNoNeuronsRetained,
                "no neurons retained at variance threshold " + format_double(threshold) +
                    "; lower t");
  }
  return p;
}

double scott_factor(std::size_t n, std::size_t d) {
  return std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
}

Matrix sample_covariance(const Matrix& rows) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  std::vector<double> mean(d);
  std::vector<double> scratch(n);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t r = 0; r < n; ++r) scratch[r] = rows(r, j);
    mean[j] = ordered_sum(scratch) / static_cast<double>(n);
  }
  Matrix cov(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = j; k < d; ++k) {
      for (std::size_t r = 0; r < n; ++r) {
        scratch[r] = (rows(r, j) - mean[j]) * (rows(r, k) - mean[k]);
      }
      const double v = ordered_sum(scratch) / static_cast<double>(n - 1);
      cov(j, k) = v;
      cov(k, j) = v;
    }
  }
  return cov;
}

void DensityModel::factorize_or_throw(double min_pivot) {
  auto l = cholesky(bandwidth_, min_pivot);
  if (!l) {
    throw Error(ErrorCode::kFactorizationFailed,
                "bandwidth matrix of " + class_name(label_) + " is not positive definite");
  }
  adopt_factor(std::move(*l));
}

void DensityModel::adopt_factor(Matrix lower) {
  cholesky_ = std::move(lower);
  log_det_ = 0.0;
  for (std::size_t i = 0; i < cholesky_.rows(); ++i) log_det_ += 2.0 * std::log(cholesky_(i, i));

  whitened_ = rows_;
  for (std::size_t r = 0; r < whitened_.rows(); ++r) forward_substitute(cholesky_, whitened_.row(r));
}

DensityModel DensityModel::with_bandwidth(std::optional<ClassLabel> label, Matrix rows,
                                          Matrix bandwidth) {
  if (rows.rows() == 0 || rows.cols() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "density model needs at least one row and column");
  }
  if (bandwidth.rows() != rows.cols() || bandwidth.cols() != rows.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "bandwidth must be d x d for d-dimensional rows");
  }
  DensityModel m;
  m.label_ = label;
  m.rows_ = std::move(rows);
  m.bandwidth_ = std::move(bandwidth);
  m.scott_factor_ = std::numeric_limits<double>::quiet_NaN();
  m.factorize_or_throw(0.0);
  return m;
}

DensityModel DensityModel::fit(std::optional<ClassLabel> label, Matrix rows) {
  const std::size_t n = rows.rows();
  const std::size_t d = rows.cols();
  if (n < 2) {
    throw Error(ErrorCode::kClassTooSmall,
                class_name(label) + " has " + std::to_string(n) +
                    " training rows; at least 2 are needed for a bandwidth");
  }
  if (d == 0) throw Error(ErrorCode::kNoNeuronsRetained, "density model has no neurons");

  DensityModel m;
  m.label_ = label;
  m.rows_ = std::move(rows);
  m.scott_factor_ = surprisal::scott_factor(n, d);
  const double scale = m.scott_factor_ * m.scott_factor_;

  const Matrix cov = sample_covariance(m.rows_);
  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) trace += cov(i, i);
  const double mean_diag = trace / static_cast<double>(d);
  double ridge = kRidgeBase * (mean_diag > 0.0 ? mean_diag : 1.0);

  for (int attempt = -1; attempt <= kRidgeEscalations; ++attempt) {
    const double applied = attempt < 0 ? 0.0 : ridge;
    Matrix h(d, d);
    double h_trace = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) h(i, j) = scale * (cov(i, j) + (i == j ? applied : 0.0));
      h_trace += h(i, i);
    }
    const double min_pivot = kRelativePivotFloor * h_trace / static_cast<double>(d);
    if (auto l = cholesky(h, min_pivot)) {
      m.bandwidth_ = std::move(h);
      m.ridge_ = applied;
      m.adopt_factor(std::move(*l));
      return m;
    }
    if (attempt >= 0) ridge *= 10.0;
  }
  throw Error(ErrorCode::kFactorizationFailed,
              "bandwidth of " + class_name(label) + " stays singular after " +
                  std::to_string(kRidgeEscalations) + " ridge escalations");
}

double DensityModel::log_density(std::span<const double> x) const {
  const std::size_t n = rows_.rows();
  const std::size_t d = rows_.cols();
  if (x.size() != d) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has " + std::to_string(x.size()) + " values, model expects " +
                    std::to_string(d));
  }
  std::vector<double> z(x.begin(), x.end());
  forward_substitute(cholesky_, z);

  std::vector<double> exponents(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto w = whitened_.row(i);
    double q = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = z[k] - w[k];
      q += diff * diff;
    }
    exponents[i] = -0.5 * q;
  }
  return log_sum_exp(exponents) - std::log(static_cast<double>(n)) -
         0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) - 0.5 * log_det_;
}

std::vector<DensityModel> fit_kde(const TraceSet& train, const TrainingProfile& profile,
                                  bool per_class, LabelSource label_source) {
  const std::vector<std::size_t> columns = profile.retained_columns();
  if (columns.empty()) throw Error(ErrorCode::kNoNeuronsRetained, "profile retains no neurons");
  if (!columns.empty() && columns.back() >= train.num_neurons()) {
    throw Error(ErrorCode::kDimensionMismatch, "profile columns exceed the training traces");
  }

  auto gather_rows = [&](const std::vector<std::size_t>& row_ids) {
    Matrix m(row_ids.size(), columns.size());
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
      gather(train.row(row_ids[i]), columns, m.row(i));
    }
    return m;
  };

  std::vector<DensityModel> models;
  if (!per_class) {
    std::vector<std::size_t> all(train.num_inputs());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    models.push_back(DensityModel::fit(std::nullopt, gather_rows(all)));
    return models;
  }
  for (const auto& [label, row_ids] : partition_by_class(train, label_source)) {
    models.push_back(DensityModel::fit(label, gather_rows(row_ids)));
  }
  return models;
}

double lsa_score(const DensityModel& model, std::span<const double> query,
                 const TrainingProfile& profile) {
  if (query.size() != profile.retained_count()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has " + std::to_string(query.size()) + " values, profile retains " +
                    std::to_string(profile.retained_count()));
  }
  return -model.log_density(query);
}

SurpriseReport lsa_batch(const std::vector<DensityModel>& models, const TraceSet& queries,
                         const TrainingProfile& profile, QueryClass query_class) {
  SurpriseReport report;
  report.kind = SaKind::kLsa;
  report.selector = profile.selector;
  report.entries.resize(queries.num_inputs());

  const DensityModel* unconditioned = nullptr;
  std::map<ClassLabel, const DensityModel*> by_class;
  for (const DensityModel& m : models) {
    if (m.label()) {
      by_class.emplace(*m.label(), &m);
    } else {
      unconditioned = &m;
    }
  }
  const std::vector<ClassLabel>* labels = nullptr;
  if (query_class == QueryClass::kUnconditioned) {
    if (!unconditioned) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unconditioned scoring needs a model fitted without per-class partitioning");
    }
  } else {
    labels = &queries.labels(query_class == QueryClass::kPredicted ? LabelSource::kPredicted
                                                                   : LabelSource::kGroundTruth);
  }
  if (!profile.columns.empty() && profile.columns.back() >= queries.num_neurons()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "queries have " + std::to_string(queries.num_neurons()) +
                    " neurons, fewer than the training profile expects");
  }

  parallel_for(queries.num_inputs(), [&](std::size_t r) {
    SurpriseEntry& e = report.entries[r];
    e.id = queries.id(r);
    const DensityModel* model = unconditioned;
    if (labels) {
      const ClassLabel c = (*labels)[r];
      e.class_used = c;
      const auto it = by_class.find(c);
      if (it == by_class.end()) {
        e.value = std::numeric_limits<double>::quiet_NaN();
        e.flag = std::string(error_code_name(ErrorCode::kUnknownClass)) + ": class " +
                 std::to_string(c.value) + " has no density model";
        return;
      }
      model = it->second;
    }
    e.value = lsa_score(*model, profile.project(queries.row(r)), profile);
  });
  return report;
}

}  // namespace surprisal
