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

#include "surprisal/dsa.h"

#include <cmath>
#include <limits>

#include "surprisal/error.h"
#include "surprisal/parallel.h"

namespace surprisal {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

struct Nearest {
  double squared = std::numeric_limits<double>::infinity();
  std::size_t row_id = std::numeric_limits<std::size_t>::max();
  std::span<const double> trace;
  bool found() const { return row_id != std::numeric_limits<std::size_t>::max(); }
};

// Lexicographic (distance, original row) minimum over one block.
void scan_block(const ClassIndex::Block& block, std::span<const double> target,
                std::optional<std::size_t> skip, Nearest& best) {
  for (std::size_t i = 0; i < block.row_ids.size(); ++i) {
    const std::size_t id = block.row_ids[i];
    if (skip && *skip == id) continue;
    const double sq = squared_distance(target, block.rows.row(i));
    if (sq < best.squared || (sq == best.squared && id < best.row_id)) {
      best.squared = sq;
      best.row_id = id;
      best.trace = block.rows.row(i);
    }
  }
}

}  // namespace

ClassIndex::ClassIndex(std::map<ClassLabel, Block> blocks, std::vector<std::size_t> columns,
                       std::string selector)
    : blocks_(std::move(blocks)), columns_(std::move(columns)), selector_(std::move(selector)) {
  if (blocks_.size() < 2) {
    throw Error(ErrorCode::kSingleClass,
                "DSA undefined without class boundaries: training set has " +
                    std::to_string(blocks_.size()) + " class(es)");
  }
  for (const auto& [label, block] : blocks_) {
    if (block.row_ids.empty() || block.rows.rows() != block.row_ids.size() ||
        block.rows.cols() != columns_.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "class " + std::to_string(label.value) + " block is malformed");
    }
  }
}

ClassIndex build_class_index(const TraceSet& train, const NeuronSelector& sel,
                             LabelSource label_source) {
  std::vector<std::size_t> columns = sel.resolve(train);
  std::map<ClassLabel, ClassIndex::Block> blocks;
  for (auto& [label, row_ids] : partition_by_class(train, label_source)) {
    ClassIndex::Block block;
    block.rows = Matrix(row_ids.size(), columns.size());
    for (std::size_t i = 0; i < row_ids.size(); ++i) {
      gather(train.row(row_ids[i]), columns, block.rows.row(i));
    }
    block.row_ids = std::move(row_ids);
    blocks.emplace(label, std::move(block));
  }
  return ClassIndex(std::move(blocks), std::move(columns), sel.describe());
}

DsaScore dsa_score(const ClassIndex& index, std::span<const double> query,
                   ClassLabel query_class, std::optional<std::size_t> exclude_self) {
  if (query.size() != index.dimension()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query has " + std::to_string(query.size()) + " values, index expects " +
                    std::to_string(index.dimension()));
  }
  const auto own = index.blocks().find(query_class);
  if (own == index.blocks().end()) {
    throw Error(ErrorCode::kUnknownClass,
                "class " + std::to_string(query_class.value) + " is absent from the training index");
  }

  Nearest a;
  scan_block(own->second, query, exclude_self, a);
  if (!a.found()) {
    throw Error(ErrorCode::kEmptySelection,
                "class " + std::to_string(query_class.value) +
                    " has no training row left after excluding the query itself");
  }

  Nearest b;
  for (const auto& [label, block] : index.blocks()) {
    if (label == query_class) continue;
    scan_block(block, a.trace, std::nullopt, b);
  }

  DsaScore s;
  s.dist_a = std::sqrt(a.squared);
  s.dist_b = std::sqrt(b.squared);
  s.ref_same_id = a.row_id;
  s.ref_other_id = b.row_id;
  if (s.dist_b == 0.0) {
    throw Error(ErrorCode::kDegenerateReference,
                "training rows " + std::to_string(a.row_id) + " and " + std::to_string(b.row_id) +
                    " have identical traces but different classes");
  }
  s.value = s.dist_a / s.dist_b;
  return s;
}

SurpriseReport dsa_batch(const ClassIndex& index, const TraceSet& queries,
                         const DsaBatchOptions& options) {
  return dsa_batch(index, queries, options, nullptr);
}

SurpriseReport dsa_batch(const ClassIndex& index, const TraceSet& queries,
                         const DsaBatchOptions& options,
                         std::vector<std::optional<DsaScore>>* scores) {
  SurpriseReport report;
  report.kind = SaKind::kDsa;
  report.selector = index.selector();
  report.entries.resize(queries.num_inputs());
  if (scores) scores->assign(queries.num_inputs(), std::nullopt);
  if (queries.num_inputs() == 0) return report;

  const auto& labels = queries.labels(options.label_source);
  if (!index.columns().empty() && index.columns().back() >= queries.num_neurons()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "queries have " + std::to_string(queries.num_neurons()) +
                    " neurons, fewer than the training index expects");
  }

  parallel_for(queries.num_inputs(), [&](std::size_t r) {
    SurpriseEntry& e = report.entries[r];
    e.id = queries.id(r);
    e.class_used = labels[r];
    std::vector<double> q(index.dimension());
    gather(queries.row(r), index.columns(), q);
    try {
      const DsaScore s = dsa_score(index, q, labels[r],
                                   options.exclude_self ? std::optional<std::size_t>(r)
                                                        : std::nullopt);
      e.value = s.value;
      if (scores) (*scores)[r] = s;
    } catch (const Error& err) {
      e.value = std::numeric_limits<double>::quiet_NaN();
      e.flag = std::string(error_code_name(err.code())) + ": " + err.what();
    }
  });
  return report;
}

}  // namespace surprisal
