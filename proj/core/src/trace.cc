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

#include "surprisal/trace.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "surprisal/error.h"

namespace surprisal {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::kInvalidArgument,
                "matrix data holds " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(rows * cols));
  }
}

std::string_view label_source_name(LabelSource source) {
  return source == LabelSource::kPredicted ? "predicted" : "ground_truth";
}

TraceSet::TraceSet(Matrix values, std::vector<LayerSpec> layers,
                   std::optional<std::vector<ClassLabel>> ground_truth,
                   std::optional<std::vector<ClassLabel>> predicted,
                   std::optional<std::vector<std::string>> ids)
    : values_(std::move(values)),
      layers_(std::move(layers)),
      ground_truth_(std::move(ground_truth)),
      predicted_(std::move(predicted)),
      ids_(std::move(ids)) {
  std::size_t next_offset = 0;
  for (const LayerSpec& layer : layers_) {
    if (layer.neuron_count == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "layer '" + layer.name + "' has no neurons");
    }
    if (layer.offset != next_offset) {
      throw Error(ErrorCode::kInvalidArgument,
                  "layer '" + layer.name + "' starts at column " +
                      std::to_string(layer.offset) + ", expected " +
                      std::to_string(next_offset));
    }
    next_offset += layer.neuron_count;
  }
  if (next_offset != values_.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "layers cover " + std::to_string(next_offset) +
                    " columns but traces have " + std::to_string(values_.cols()));
  }
  for (std::size_t r = 0; r < values_.rows(); ++r) {
    const auto row = values_.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        throw Error(ErrorCode::kNonFinite,
                    "non-finite activation at row " + std::to_string(r) +
                        ", column " + std::to_string(c));
      }
    }
  }
  auto check_length = [&](std::size_t size, std::string_view what) {
    if (size != values_.rows()) {
      throw Error(ErrorCode::kLabelLengthMismatch,
                  std::string(what) + " has " + std::to_string(size) +
                      " entries for " + std::to_string(values_.rows()) + " inputs");
    }
  };
  if (ground_truth_) check_length(ground_truth_->size(), "ground-truth label list");
  if (predicted_) check_length(predicted_->size(), "predicted label list");
  if (ids_) check_length(ids_->size(), "id list");
}

TraceSet TraceSet::single_layer(Matrix values, std::string layer_name) {
  const std::size_t cols = values.cols();
  return TraceSet(std::move(values), {LayerSpec{std::move(layer_name), cols, 0}});
}

const LayerSpec& TraceSet::layer(std::string_view name) const {
  for (const LayerSpec& layer : layers_) {
    if (layer.name == name) return layer;
  }
  throw Error(ErrorCode::kUnknownLayer, "unknown layer '" + std::string(name) + "'");
}

bool TraceSet::has_labels(LabelSource source) const noexcept {
  return source == LabelSource::kPredicted ? predicted_.has_value()
                                           : ground_truth_.has_value();
}

const std::vector<ClassLabel>& TraceSet::labels(LabelSource source) const {
  const auto& list = source == LabelSource::kPredicted ? predicted_ : ground_truth_;
  if (!list) {
    throw Error(ErrorCode::kMissingLabels,
                "traces carry no " + std::string(label_source_name(source)) +
                    " labels; supply them in the manifest");
  }
  return *list;
}

std::string TraceSet::id(std::size_t r) const {
  return ids_ ? (*ids_)[r] : std::to_string(r);
}

std::vector<std::size_t> NeuronSelector::resolve(const TraceSet& traces) const {
  std::vector<std::size_t> out;
  switch (mode_) {
    case Mode::kAll:
      out.resize(traces.num_neurons());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
      break;
    case Mode::kLayer: {
      const LayerSpec& spec = traces.layer(layer_);
      out.resize(spec.neuron_count);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = spec.offset + i;
      break;
    }
    case Mode::kColumns:
      out = columns_;
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      if (!out.empty() && out.back() >= traces.num_neurons()) {
        throw Error(ErrorCode::kColumnOutOfRange,
                    "column " + std::to_string(out.back()) + " is out of range for " +
                        std::to_string(traces.num_neurons()) + " neurons");
      }
      break;
  }
  return out;
}

std::string NeuronSelector::describe() const {
  switch (mode_) {
    case Mode::kAll: return "all";
    case Mode::kLayer: return "layer:" + layer_;
    case Mode::kColumns: {
      std::vector<std::size_t> sorted = columns_;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      std::string s = "columns:";
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) s += ';';
        s += std::to_string(sorted[i]);
      }
      return s;
    }
  }
  return "";
}

void gather(std::span<const double> row, std::span<const std::size_t> columns,
            std::span<double> out) {
  for (std::size_t i = 0; i < columns.size(); ++i) out[i] = row[columns[i]];
}

TraceSet select_columns(const TraceSet& traces, const NeuronSelector& sel) {
  const std::vector<std::size_t> columns = sel.resolve(traces);
  if (sel.mode() == NeuronSelector::Mode::kAll) return traces;

  Matrix values(traces.num_inputs(), columns.size());
  for (std::size_t r = 0; r < traces.num_inputs(); ++r) {
    gather(traces.row(r), columns, values.row(r));
  }

  std::vector<LayerSpec> layers;
  std::size_t offset = 0;
  auto col = columns.begin();
  for (const LayerSpec& src : traces.layers()) {
    std::size_t count = 0;
    while (col != columns.end() && *col < src.offset + src.neuron_count) {
      ++count;
      ++col;
    }
    if (count > 0) {
      layers.push_back(LayerSpec{src.name, count, offset});
      offset += count;
    }
  }

  std::optional<std::vector<std::string>> ids;
  if (traces.has_ids()) {
    ids.emplace();
    for (std::size_t r = 0; r < traces.num_inputs(); ++r) ids->push_back(traces.id(r));
  }
  return TraceSet(std::move(values), std::move(layers), traces.ground_truth(),
                  traces.predicted(), std::move(ids));
}

std::map<ClassLabel, std::vector<std::size_t>> partition_by_class(
    const TraceSet& traces, LabelSource source) {
  const auto& labels = traces.labels(source);
  std::map<ClassLabel, std::vector<std::size_t>> parts;
  for (std::size_t r = 0; r < labels.size(); ++r) parts[labels[r]].push_back(r);
  return parts;
}

}  // namespace surprisal
