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

#ifndef SURPRISAL_DSA_H_
#define SURPRISAL_DSA_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "surprisal/report.h"
#include "surprisal/trace.h"

namespace surprisal {

// Training traces over the selected neurons, grouped by class. Rows within a
// class keep ascending original order.
class ClassIndex {
 public:
  struct Block {
    Matrix rows;
    std::vector<std::size_t> row_ids;  // original training row of each entry
  };

  // Throws kSingleClass unless at least two classes are present.
  ClassIndex(std::map<ClassLabel, Block> blocks, std::vector<std::size_t> columns,
             std::string selector);

  const std::map<ClassLabel, Block>& blocks() const noexcept { return blocks_; }
  const std::vector<std::size_t>& columns() const noexcept { return columns_; }
  const std::string& selector() const noexcept { return selector_; }
  std::size_t dimension() const noexcept { return columns_.size(); }
  bool has_class(ClassLabel c) const { return blocks_.count(c) != 0; }

 private:
  std::map<ClassLabel, Block> blocks_;
  std::vector<std::size_t> columns_;
  std::string selector_;
};

ClassIndex build_class_index(const TraceSet& train, const NeuronSelector& sel,
                             LabelSource label_source = LabelSource::kPredicted);

struct DsaScore {
  double value = 0.0;
  double dist_a = 0.0;
  double dist_b = 0.0;
  std::size_t ref_same_id = 0;   // x_a, as an original training row
  std::size_t ref_other_id = 0;  // x_b, as an original training row
};

// `query` holds the selected neurons only (dimension() values).
//
// x_a is the nearest same-class training trace to the query, x_b the
// nearest other-class trace to x_a; ties go to the lowest original row.
// With `exclude_self`, that training row is skipped when searching for x_a.
// Throws kUnknownClass, kEmptySelection (no same-class candidate left), or
// kDegenerateReference when dist_b is zero.
DsaScore dsa_score(const ClassIndex& index, std::span<const double> query,
                   ClassLabel query_class, std::optional<std::size_t> exclude_self = std::nullopt);

struct DsaBatchOptions {
  LabelSource label_source = LabelSource::kPredicted;
  // Treat query row i as training row i and exclude it from its own x_a
  // search; for scoring the training set against itself.
  bool exclude_self = false;
};

// Scores each full-width query row. Rows with errors are flagged and the
// batch continues.
SurpriseReport dsa_batch(const ClassIndex& index, const TraceSet& queries,
                         const DsaBatchOptions& options = {});

// Also returns the per-row DsaScore (nullopt for flagged rows).
SurpriseReport dsa_batch(const ClassIndex& index, const TraceSet& queries,
                         const DsaBatchOptions& options,
                         std::vector<std::optional<DsaScore>>* scores);

}  // namespace surprisal

#endif  // SURPRISAL_DSA_H_
