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

#include "surprisal/manifest.h"

#include <cstring>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "generators.h"
#include "surprisal/npy.h"
#include "temp_dir.h"
#include "test_util.h"

namespace surprisal {
namespace {

using testing::code_of;
using testing::TempDir;

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string two_layer_manifest(const std::string& extra = "") {
  return R"({"format_version": 1, "dataset_name": "toy", "layers": [
    {"name": "a", "file_path": "a.npy", "neuron_count": 4},
    {"name": "b", "file_path": "b.npy", "neuron_count": 6}])" +
         extra + "}";
}

TEST(LoadTracesetTest, ConcatenatesLayersInManifestOrder) {
  TempDir dir;
  Rng rng(1);
  const Matrix a = gen::normal_matrix(rng, 10, 4);
  const Matrix b = gen::normal_matrix(rng, 10, 6);
  write_array_file(dir / "a.npy", a);
  write_array_file(dir / "b.npy", b);
  write_text(dir / "m.json", two_layer_manifest());

  const TraceSet t = load_traceset(dir / "m.json");
  ASSERT_EQ(t.num_inputs(), 10u);
  ASSERT_EQ(t.num_neurons(), 10u);
  ASSERT_EQ(t.layers().size(), 2u);
  EXPECT_EQ(t.layers()[0].offset, 0u);
  EXPECT_EQ(t.layers()[1].offset, 4u);
  EXPECT_EQ(t.values()(7, 3), a(7, 3));
  EXPECT_EQ(t.values()(7, 4), b(7, 0));
  EXPECT_FALSE(t.ground_truth().has_value());
}

TEST(LoadTracesetTest, RowCountMismatch) {
  TempDir dir;
  write_array_file(dir / "a.npy", Matrix(10, 4));
  write_array_file(dir / "b.npy", Matrix(9, 6));
  write_text(dir / "m.json", two_layer_manifest());
  EXPECT_EQ(code_of([&] { load_traceset(dir / "m.json"); }), ErrorCode::kRowCountMismatch);
}

TEST(LoadTracesetTest, AttachesLabels) {
  TempDir dir;
  write_array_file(dir / "a.npy", Matrix(10, 4));
  write_array_file(dir / "b.npy", Matrix(10, 6));
  write_label_array_file(dir / "y.npy", {0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
  write_text(dir / "p.json", R"(["cat", "dog", "cat", "cat", "dog", "dog", "cat", "cat", "dog", 1])");
  write_text(dir / "m.json",
             two_layer_manifest(R"(, "labels_path": "y.npy", "predicted_path": "p.json",
                                   "label_dictionary": {"cat": 0, "dog": 1})"));
  const TraceSet t = load_traceset(dir / "m.json");
  ASSERT_TRUE(t.ground_truth().has_value());
  EXPECT_EQ(t.ground_truth()->size(), 10u);
  EXPECT_EQ((*t.ground_truth())[3].value, 1);
  EXPECT_EQ((*t.predicted())[1].value, 1);
  EXPECT_EQ((*t.predicted())[9].value, 1);
}

TEST(LoadTracesetTest, LabelLengthMismatch) {
  TempDir dir;
  write_array_file(dir / "a.npy", Matrix(10, 4));
  write_array_file(dir / "b.npy", Matrix(10, 6));
  write_label_array_file(dir / "y.npy", {0, 1, 0});
  write_text(dir / "m.json", two_layer_manifest(R"(, "labels_path": "y.npy")"));
  EXPECT_EQ(code_of([&] { load_traceset(dir / "m.json"); }), ErrorCode::kLabelLengthMismatch);
}

TEST(LoadTracesetTest, RejectsNonFiniteFiles) {
  // A hand-built file, since the writer refuses non-finite values.
  TempDir dir;
  const std::string good = serialize_array(Matrix(10, 4, 0.5));
  for (double bad : {std::numeric_limits<double>::quiet_NaN(),
                     -std::numeric_limits<double>::infinity()}) {
    std::string bytes = good;
    std::memcpy(bytes.data() + bytes.size() - 8, &bad, 8);
    std::ofstream(dir / "a.npy", std::ios::binary) << bytes;
    write_array_file(dir / "b.npy", Matrix(10, 6));
    write_text(dir / "m.json", two_layer_manifest());
    EXPECT_EQ(code_of([&] { load_traceset(dir / "m.json"); }), ErrorCode::kNonFinite);
  }
}

TEST(LoadTracesetTest, NeuronCountMustMatchFile) {
  TempDir dir;
  write_array_file(dir / "a.npy", Matrix(10, 5));
  write_array_file(dir / "b.npy", Matrix(10, 6));
  write_text(dir / "m.json", two_layer_manifest());
  EXPECT_EQ(code_of([&] { load_traceset(dir / "m.json"); }), ErrorCode::kBadManifest);
}

TEST(ManifestTest, RejectsMalformedDocuments) {
  for (const std::string& text : {
           std::string("not json"),
           std::string("[]"),
           std::string(R"({"dataset_name": "x", "layers": []})"),
           std::string(R"({"format_version": 2, "dataset_name": "x", "layers": [{"name": "a", "file_path": "a", "neuron_count": 1}]})"),
           std::string(R"({"format_version": 1, "dataset_name": "x", "layers": []})"),
           std::string(R"({"format_version": 1, "dataset_name": "x", "layers": [{"name": "a", "file_path": "a", "neuron_count": 0}]})"),
           std::string(R"({"format_version": 1, "dataset_name": "x", "layers": [{"name": "a", "file_path": "a", "neuron_count": 1}, {"name": "a", "file_path": "b", "neuron_count": 1}]})"),
           std::string(R"({"format_version": 1, "dataset_name": "x", "layers": [{"name": "a", "file_path": "a", "neuron_count": 1}], "label_dictionary": {"x": 0, "y": 0}})"),
       }) {
    EXPECT_EQ(code_of([&] { parse_manifest(text); }), ErrorCode::kBadManifest) << text;
  }
}

TEST(ManifestTest, JsonRoundTrip) {
  Manifest m;
  m.dataset_name = "mnist-test";
  m.layers = {{"activation_3", "act3.npy", 128}, {"dense", "/abs/dense.npy", 10}};
  m.labels_path = "labels.npy";
  m.label_dictionary = {{"seven", 7}, {"one", 1}};
  const Manifest back = parse_manifest(manifest_to_json(m));
  EXPECT_EQ(back.dataset_name, m.dataset_name);
  ASSERT_EQ(back.layers.size(), 2u);
  EXPECT_EQ(back.layers[1].file_path, "/abs/dense.npy");
  EXPECT_EQ(back.layers[0].neuron_count, 128u);
  EXPECT_EQ(back.labels_path, m.labels_path);
  EXPECT_FALSE(back.predicted_path.has_value());
  EXPECT_EQ(back.label_dictionary, m.label_dictionary);
  EXPECT_EQ(manifest_to_json(back), manifest_to_json(m));
}

TEST(SaveTracesetTest, RoundTripsThroughLoader) {
  TempDir dir;
  Rng rng(4);
  const TraceSet t(gen::normal_matrix(rng, 7, 5), gen::layout({2, 3}), gen::labels(rng, 7, 3),
                   gen::labels(rng, 7, 3));
  const auto path = save_traceset(dir / "out", "demo", t, {{"c0", 0}, {"c1", 1}, {"c2", 2}});
  const TraceSet back = load_traceset(path);
  EXPECT_EQ(back.values(), t.values());
  EXPECT_EQ(back.layers(), t.layers());
  EXPECT_EQ(back.ground_truth(), t.ground_truth());
  EXPECT_EQ(back.predicted(), t.predicted());
  EXPECT_EQ(read_manifest(path).label_dictionary.size(), 3u);
}

}  // namespace
}  // namespace surprisal
