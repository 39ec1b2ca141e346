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

#ifndef SURPRISAL_MANIFEST_H_
#define SURPRISAL_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "surprisal/trace.h"

namespace surprisal {

inline constexpr int kManifestFormatVersion = 1;

struct ManifestLayer {
  std::string name;
  std::string file_path;  // relative paths resolve against the manifest's directory
  std::size_t neuron_count = 0;
};

// JSON description of a dataset's trace files:
//
//   {
//     "format_version": 1,
//     "dataset_name": "mnist-test",
//     "layers": [{"name": "activation_3", "file_path": "act3.npy", "neuron_count": 128}],
//     "labels_path": "labels.npy",        (optional)
//     "predicted_path": "predicted.json", (optional)
//     "label_dictionary": {"cat": 0}      (optional; needed for text labels)
//   }
//
// Label files are either `.npy` integer arrays or JSON lists of integers or
// strings; strings are mapped through label_dictionary.
struct Manifest {
  std::string dataset_name;
  std::vector<ManifestLayer> layers;
  std::optional<std::string> labels_path;
  std::optional<std::string> predicted_path;
  std::map<std::string, std::int64_t> label_dictionary;
  int format_version = kManifestFormatVersion;
};

Manifest parse_manifest(const std::string& json_text);
Manifest read_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const Manifest& manifest);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

// Loads and validates every referenced file, concatenating layers
// column-wise in manifest order.
TraceSet load_traceset(const std::filesystem::path& manifest_path);

// Writes one `<f8` file per layer, `<i8` label files, and `manifest.json`
// into `dir` (created if missing). Returns the manifest path.
std::filesystem::path save_traceset(
    const std::filesystem::path& dir, const std::string& dataset_name,
    const TraceSet& traces,
    const std::map<std::string, std::int64_t>& label_dictionary = {});

// Reads a label list from `.npy` or `.json` (by extension).
std::vector<ClassLabel> read_label_file(
    const std::filesystem::path& path,
    const std::map<std::string, std::int64_t>& dictionary = {});

}  // namespace surprisal

#endif  // SURPRISAL_MANIFEST_H_
