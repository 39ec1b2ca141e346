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

#ifndef SURPRISAL_TRACE_H_
#define SURPRISAL_TRACE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace surprisal {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  // `data` must hold rows * cols values in row-major order.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct ClassLabel {
  std::int64_t value = 0;

  friend auto operator<=>(const ClassLabel&, const ClassLabel&) = default;
};

// Which per-input label list an operation reads.
enum class LabelSource { kPredicted, kGroundTruth };

std::string_view label_source_name(LabelSource source);

struct LayerSpec {
  std::string name;
  std::size_t neuron_count = 0;
  std::size_t offset = 0;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Activation traces of a set of inputs: one row per input, layers laid out
// as contiguous column blocks. Immutable once constructed.
class TraceSet {
 public:
  // Validates every invariant (layer contiguity, finite values, label
  // lengths) and throws surprisal::Error on violation.
  TraceSet(Matrix values, std::vector<LayerSpec> layers,
           std::optional<std::vector<ClassLabel>> ground_truth = std::nullopt,
           std::optional<std::vector<ClassLabel>> predicted = std::nullopt,
           std::optional<std::vector<std::string>> ids = std::nullopt);

  // A trace set with one layer spanning every column.
  static TraceSet single_layer(Matrix values, std::string layer_name = "all");

  std::size_t num_inputs() const noexcept { return values_.rows(); }
  std::size_t num_neurons() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }
  std::span<const double> row(std::size_t r) const { return values_.row(r); }
  const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
  const LayerSpec& layer(std::string_view name) const;

  const std::optional<std::vector<ClassLabel>>& ground_truth() const noexcept {
    return ground_truth_;
  }
  const std::optional<std::vector<ClassLabel>>& predicted() const noexcept {
    return predicted_;
  }
  bool has_labels(LabelSource source) const noexcept;
  // Throws kMissingLabels when the requested list is absent.
  const std::vector<ClassLabel>& labels(LabelSource source) const;

  bool has_ids() const noexcept { return ids_.has_value(); }
  // Explicit identifier when present, otherwise the decimal row index.
  std::string id(std::size_t r) const;

 private:
  Matrix values_;
  std::vector<LayerSpec> layers_;
  std::optional<std::vector<ClassLabel>> ground_truth_;
  std::optional<std::vector<ClassLabel>> predicted_;
  std::optional<std::vector<std::string>> ids_;
};

class NeuronSelector {
 public:
  enum class Mode { kAll, kLayer, kColumns };

  static NeuronSelector all() { return NeuronSelector(Mode::kAll, {}, {}); }
  static NeuronSelector layer(std::string name) {
    return NeuronSelector(Mode::kLayer, std::move(name), {});
  }
  static NeuronSelector columns(std::vector<std::size_t> columns) {
    return NeuronSelector(Mode::kColumns, {}, std::move(columns));
  }

  Mode mode() const noexcept { return mode_; }
  const std::string& layer_name() const noexcept { return layer_; }

  // Sorted, duplicate-free column indices into `traces`. Throws
  // kUnknownLayer / kColumnOutOfRange naming the offending input.
  std::vector<std::size_t> resolve(const TraceSet& traces) const;

  // Short human-readable form used in report headers, e.g. "layer:L2".
  std::string describe() const;

 private:
  NeuronSelector(Mode mode, std::string layer, std::vector<std::size_t> columns)
      : mode_(mode), layer_(std::move(layer)), columns_(std::move(columns)) {}

  Mode mode_;
  std::string layer_;
  std::vector<std::size_t> columns_;
};

// Copies the selected columns into a new trace set. Layers keep their names;
// a layer survives with the count of its selected columns.
TraceSet select_columns(const TraceSet& traces, const NeuronSelector& sel);

// Copies `row` restricted to `columns` into `out`.
void gather(std::span<const double> row, std::span<const std::size_t> columns,
            std::span<double> out);

// Row indices grouped by label, ascending within each group.
std::map<ClassLabel, std::vector<std::size_t>> partition_by_class(
    const TraceSet& traces, LabelSource source);

}  // namespace surprisal

#endif  // SURPRISAL_TRACE_H_
