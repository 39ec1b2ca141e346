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
#include <map>

#include <gtest/gtest.h>

#include "generators.h"
#include "oracles.h"
#include "test_util.h"

namespace surprisal {
namespace {

using testing::code_of;
using testing::relative_error;

TraceSet labeled(Matrix m, std::vector<ClassLabel> labels) {
  const std::size_t cols = m.cols();
  return TraceSet(std::move(m), {LayerSpec{"all", cols, 0}}, std::nullopt, std::move(labels));
}

ClassIndex hand_index() {
  return build_class_index(labeled(Matrix(2, 1, std::vector<double>{0.0, 3.0}), {{0}, {1}}),
                           NeuronSelector::all());
}

TEST(ClassIndexTest, GroupsRowsByClass) {
  const ClassIndex idx = build_class_index(
      labeled(Matrix(3, 1, std::vector<double>{1, 2, 3}), {{0}, {1}, {1}}), NeuronSelector::all());
  EXPECT_EQ(idx.blocks().at(ClassLabel{0}).row_ids, (std::vector<std::size_t>{0}));
  EXPECT_EQ(idx.blocks().at(ClassLabel{1}).row_ids, (std::vector<std::size_t>{1, 2}));
}

TEST(ClassIndexTest, SingleClassIsAnError) {
  EXPECT_EQ(code_of([] {
              build_class_index(labeled(Matrix(3, 1), {{0}, {0}, {0}}), NeuronSelector::all());
            }),
            ErrorCode::kSingleClass);
}

TEST(ClassIndexTest, OneRowPerClassIsValid) {
  std::vector<ClassLabel> labels;
  Matrix m(10, 2);
  for (std::size_t i = 0; i < 10; ++i) {
    labels.push_back(ClassLabel{static_cast<std::int64_t>(i)});
    m(i, 0) = static_cast<double>(i);
  }
  const ClassIndex idx = build_class_index(labeled(m, labels), NeuronSelector::all());
  EXPECT_EQ(idx.blocks().size(), 10u);
}

TEST(DsaScoreTest, HandExamples) {
  const ClassIndex idx = hand_index();
  const std::vector<double> one = {1.0};
  const DsaScore a = dsa_score(idx, one, ClassLabel{0});
  EXPECT_EQ(a.dist_a, 1.0);
  EXPECT_EQ(a.dist_b, 3.0);
  EXPECT_EQ(a.ref_same_id, 0u);
  EXPECT_EQ(a.ref_other_id, 1u);
  EXPECT_EQ(a.value, 1.0 / 3.0);

  const std::vector<double> two = {2.0};
  const DsaScore b = dsa_score(idx, two, ClassLabel{0});
  EXPECT_EQ(b.dist_a, 2.0);
  EXPECT_EQ(b.value, 2.0 / 3.0);
  EXPECT_GT(b.value, a.value);

  const std::vector<double> zero = {0.0};
  EXPECT_EQ(dsa_score(idx, zero, ClassLabel{0}).value, 0.0);
}

TEST(DsaScoreTest, Errors) {
  const ClassIndex idx = hand_index();
  const std::vector<double> q = {1.0};
  EXPECT_EQ(code_of([&] { dsa_score(idx, q, ClassLabel{5}); }), ErrorCode::kUnknownClass);
  EXPECT_EQ(code_of([&] { dsa_score(idx, q, ClassLabel{0}, 0); }), ErrorCode::kEmptySelection);
  const ClassIndex twins = build_class_index(
      labeled(Matrix(2, 1, std::vector<double>{4.0, 4.0}), {{0}, {1}}), NeuronSelector::all());
  EXPECT_EQ(code_of([&] { dsa_score(twins, q, ClassLabel{0}); }),
            ErrorCode::kDegenerateReference);
}

TEST(DsaScoreTest, TiesGoToLowestRow) {
  // Rows 1 and 3 are equidistant from the query; row 1 must win.
  const ClassIndex idx = build_class_index(
      labeled(Matrix(4, 1, std::vector<double>{10.0, -1.0, 5.0, 1.0}), {{1}, {0}, {1}, {0}}),
      NeuronSelector::all());
  const std::vector<double> q = {0.0};
  EXPECT_EQ(dsa_score(idx, q, ClassLabel{0}).ref_same_id, 1u);
}

TEST(DsaBatchTest, ComposesHandExamples) {
  const ClassIndex idx = hand_index();
  const SurpriseReport r = dsa_batch(
      idx, labeled(Matrix(3, 1, std::vector<double>{0.0, 1.0, 2.0}), {{0}, {0}, {0}}));
  ASSERT_EQ(r.entries.size(), 3u);
  EXPECT_EQ(r.entries[0].value, 0.0);
  EXPECT_EQ(r.entries[1].value, 1.0 / 3.0);
  EXPECT_EQ(r.entries[2].value, 2.0 / 3.0);
}

TEST(DsaBatchTest, EmptyAndUnknown) {
  const ClassIndex idx = hand_index();
  EXPECT_TRUE(dsa_batch(idx, labeled(Matrix(0, 1), {})).entries.empty());
  const SurpriseReport r = dsa_batch(
      idx, labeled(Matrix(3, 1, std::vector<double>{0.0, 1.0, 2.0}), {{0}, {9}, {1}}));
  EXPECT_EQ(r.flagged_count(), 1u);
  EXPECT_EQ(r.entries[1].flag.rfind("unknown_class", 0), 0u);
  EXPECT_TRUE(r.entries[2].ok());
}

TEST(DsaBatchTest, ExcludeSelfScoresTrainingSet) {
  Rng rng(1);
  const TraceSet train = labeled(gen::normal_matrix(rng, 30, 3), gen::labels(rng, 30, 2));
  const ClassIndex idx = build_class_index(train, NeuronSelector::all());
  DsaBatchOptions opt;
  opt.exclude_self = true;
  std::vector<std::optional<DsaScore>> scores;
  dsa_batch(idx, train, opt, &scores);
  const auto labels = gen::raw(*train.predicted());
  for (std::size_t r = 0; r < 30; ++r) {
    ASSERT_TRUE(scores[r].has_value());
    EXPECT_NE(scores[r]->ref_same_id, r);
    const auto want = oracle::brute_dsa(train.values(), labels, train.row(r), labels[r], r);
    ASSERT_TRUE(want.has_value());
    EXPECT_EQ(scores[r]->value, want->value);
  }
}

// Full-trace-set helper for the property tests below.
struct Instance {
  Matrix train;
  std::vector<std::int64_t> labels;
  Matrix queries;
  std::vector<std::int64_t> query_labels;
};

Instance random_instance(Rng& rng, bool grid) {
  Instance in;
  const std::size_t n = gen::between(rng, 2, 120);
  const std::size_t d = gen::between(rng, 1, 6);
  const std::size_t classes = gen::between(rng, 2, 4);
  in.train = grid ? gen::grid_matrix(rng, n, d, 6) : gen::normal_matrix(rng, n, d);
  auto l = gen::labels(rng, n, classes);
  l[0].value = 0;
  l[1].value = 1;
  in.labels = gen::raw(l);
  in.queries = grid ? gen::grid_matrix(rng, 20, d, 6) : gen::normal_matrix(rng, 20, d);
  in.query_labels = gen::raw(gen::labels(rng, 20, classes));
  return in;
}

std::vector<ClassLabel> wrap(const std::vector<std::int64_t>& raw) {
  std::vector<ClassLabel> out;
  for (auto v : raw) out.push_back(ClassLabel{v});
  return out;
}

TEST(DsaProperty, MatchesBruteForceExactly) {
  Rng rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance in = random_instance(rng, trial % 2 == 1);
    const TraceSet train = labeled(in.train, wrap(in.labels));
    const ClassIndex idx = build_class_index(train, NeuronSelector::all());
    std::vector<std::optional<DsaScore>> scores;
    const SurpriseReport r =
        dsa_batch(idx, labeled(in.queries, wrap(in.query_labels)), {}, &scores);
    for (std::size_t q = 0; q < in.queries.rows(); ++q) {
      const auto want =
          oracle::brute_dsa(in.train, in.labels, in.queries.row(q), in.query_labels[q]);
      if (!want) {
        EXPECT_FALSE(r.entries[q].ok());
        continue;
      }
      ASSERT_TRUE(scores[q].has_value()) << r.entries[q].flag;
      EXPECT_EQ(scores[q]->value, want->value);
      EXPECT_EQ(scores[q]->dist_a, want->dist_a);
      EXPECT_EQ(scores[q]->dist_b, want->dist_b);
      EXPECT_EQ(scores[q]->ref_same_id, want->a_row);
      EXPECT_EQ(scores[q]->ref_other_id, want->b_row);
      EXPECT_GE(scores[q]->value, 0.0);
      EXPECT_EQ(scores[q]->value == 0.0, scores[q]->dist_a == 0.0);
    }
  }
}

TEST(DsaProperty, ScaleAndTranslationInvariant) {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    // Traces and shift sit on a 2^-30 grid so that adding the shift is exact;
    // otherwise rounding x + s alone moves DSA by up to |s| eps / dist_b.
    Instance in = random_instance(rng, false);
    in.train = gen::dyadic(in.train);
    in.queries = gen::dyadic(in.queries);
    const double c = std::exp(2.0 * rng.normal());
    std::vector<double> shift(in.train.cols());
    for (double& s : shift) s = gen::dyadic(5.0 * rng.normal());
    auto transform = [&](const Matrix& m, bool scale) {
      Matrix out = m;
      for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t k = 0; k < m.cols(); ++k) {
          out(r, k) = scale ? c * m(r, k) : m(r, k) + shift[k];
        }
      }
      return out;
    };
    const TraceSet queries = labeled(in.queries, wrap(in.query_labels));
    const SurpriseReport base = dsa_batch(
        build_class_index(labeled(in.train, wrap(in.labels)), NeuronSelector::all()), queries);
    for (bool scale : {true, false}) {
      const SurpriseReport moved = dsa_batch(
          build_class_index(labeled(transform(in.train, scale), wrap(in.labels)),
                            NeuronSelector::all()),
          labeled(transform(in.queries, scale), wrap(in.query_labels)));
      for (std::size_t q = 0; q < base.entries.size(); ++q) {
        if (!base.entries[q].ok()) continue;
        ASSERT_TRUE(moved.entries[q].ok());
        const double want = base.entries[q].value;
        const double got = moved.entries[q].value;
        if (scale) {
          EXPECT_LE(relative_error(got, want), 1e-12) << got << " vs " << want;
        } else {
          EXPECT_LE(std::abs(got - want), 1e-12 * std::max(1.0, std::abs(want)))
              << got << " vs " << want;
        }
      }
    }
  }
}

TEST(DsaProperty, RowPermutationKeepsValuesAndReferences) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const Instance in = random_instance(rng, trial % 2 == 0);
    const std::size_t n = in.train.rows();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    // Blocks receive the rows in shuffled order but keep their original
    // row ids, so ties still resolve to the lowest original row.
    std::map<ClassLabel, ClassIndex::Block> blocks;
    std::map<ClassLabel, std::vector<std::size_t>> members;
    for (std::size_t r = 0; r < n; ++r) members[ClassLabel{in.labels[order[r]]}].push_back(order[r]);
    for (const auto& [label, ids] : members) {
      ClassIndex::Block block;
      block.rows = Matrix(ids.size(), in.train.cols());
      for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t k = 0; k < in.train.cols(); ++k) block.rows(i, k) = in.train(ids[i], k);
      }
      block.row_ids = ids;
      blocks.emplace(label, std::move(block));
    }
    std::vector<std::size_t> columns(in.train.cols());
    for (std::size_t k = 0; k < columns.size(); ++k) columns[k] = k;
    const ClassIndex shuffled(std::move(blocks), columns, "all");

    std::vector<std::optional<DsaScore>> a;
    std::vector<std::optional<DsaScore>> b;
    const TraceSet queries = labeled(in.queries, wrap(in.query_labels));
    dsa_batch(build_class_index(labeled(in.train, wrap(in.labels)), NeuronSelector::all()),
              queries, {}, &a);
    dsa_batch(shuffled, queries, {}, &b);
    for (std::size_t q = 0; q < a.size(); ++q) {
      ASSERT_EQ(a[q].has_value(), b[q].has_value());
      if (!a[q]) continue;
      EXPECT_EQ(a[q]->value, b[q]->value);
      EXPECT_EQ(a[q]->ref_same_id, b[q]->ref_same_id);
      EXPECT_EQ(a[q]->ref_other_id, b[q]->ref_other_id);
    }
  }
}

}  // namespace
}  // namespace surprisal
