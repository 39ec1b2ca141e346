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

#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "surprisal/error.h"
#include "surprisal/npy.h"

namespace surprisal {
namespace {

using nlohmann::json;

[[noreturn]] void bad_manifest(const std::string& what) {
  throw Error(ErrorCode::kBadManifest, what);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spill(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "error writing '" + path.string() + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    bad_manifest(std::string("manifest field '") + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) {
    bad_manifest(std::string("manifest field '") + key + "' must be a string");
  }
  return j[key].get<std::string>();
}

}  // namespace

Manifest parse_manifest(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad_manifest(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad_manifest("manifest must be a JSON object");

  Manifest m;
  if (!j.contains("format_version") || !j["format_version"].is_number_integer()) {
    bad_manifest("manifest field 'format_version' must be an integer");
  }
  m.format_version = j["format_version"].get<int>();
  if (m.format_version != kManifestFormatVersion) {
    bad_manifest("unsupported manifest format_version " + std::to_string(m.format_version));
  }
  m.dataset_name = require_string(j, "dataset_name");

  if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
    bad_manifest("manifest field 'layers' must be a non-empty array");
  }
  std::set<std::string> names;
  for (const json& layer : j["layers"]) {
    if (!layer.is_object()) bad_manifest("manifest layer entries must be objects");
    ManifestLayer l;
    l.name = require_string(layer, "name");
    l.file_path = require_string(layer, "file_path");
    if (!layer.contains("neuron_count") || !layer["neuron_count"].is_number_unsigned() ||
        layer["neuron_count"].get<std::size_t>() == 0) {
      bad_manifest("layer '" + l.name + "' needs a positive integer neuron_count");
    }
    l.neuron_count = layer["neuron_count"].get<std::size_t>();
    if (!names.insert(l.name).second) bad_manifest("duplicate layer name '" + l.name + "'");
    m.layers.push_back(std::move(l));
  }

  m.labels_path = optional_string(j, "labels_path");
  m.predicted_path = optional_string(j, "predicted_path");

  if (j.contains("label_dictionary") && !j["label_dictionary"].is_null()) {
    const json& dict = j["label_dictionary"];
    if (!dict.is_object()) bad_manifest("label_dictionary must be an object");
    std::set<std::int64_t> seen;
    for (const auto& [text, index] : dict.items()) {
      if (!index.is_number_integer() || index.get<std::int64_t>() < 0) {
        bad_manifest("label_dictionary entry '" + text + "' must map to a non-negative integer");
      }
      const auto value = index.get<std::int64_t>();
      if (!seen.insert(value).second) {
        bad_manifest("label_dictionary maps two labels to " + std::to_string(value));
      }
      m.label_dictionary.emplace(text, value);
    }
  }
  return m;
}

Manifest read_manifest(const std::filesystem::path& path) { return parse_manifest(slurp(path)); }

std::string manifest_to_json(const Manifest& m) {
  json j;
  j["format_version"] = m.format_version;
  j["dataset_name"] = m.dataset_name;
  j["layers"] = json::array();
  for (const ManifestLayer& l : m.layers) {
    j["layers"].push_back(
        {{"name", l.name}, {"file_path", l.file_path}, {"neuron_count", l.neuron_count}});
  }
  if (m.labels_path) j["labels_path"] = *m.labels_path;
  if (m.predicted_path) j["predicted_path"] = *m.predicted_path;
  if (!m.label_dictionary.empty()) j["label_dictionary"] = m.label_dictionary;
  return j.dump(2) + "\n";
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  spill(path, manifest_to_json(manifest));
}

std::vector<ClassLabel> read_label_file(const std::filesystem::path& path,
                                        const std::map<std::string, std::int64_t>& dictionary) {
  std::vector<ClassLabel> out;
  if (path.extension() == ".json") {
    json j;
    try {
      j = json::parse(slurp(path));
    } catch (const json::parse_error& e) {
      bad_manifest(path.string() + ": label file is not valid JSON: " + e.what());
    }
    if (!j.is_array()) bad_manifest(path.string() + ": label file must be a JSON list");
    out.reserve(j.size());
    for (const json& v : j) {
      if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        out.push_back(ClassLabel{v.get<std::int64_t>()});
      } else if (v.is_string()) {
        const auto it = dictionary.find(v.get<std::string>());
        if (it == dictionary.end()) {
          bad_manifest(path.string() + ": label '" + v.get<std::string>() +
                       "' missing from label_dictionary");
        }
        out.push_back(ClassLabel{it->second});
      } else {
        bad_manifest(path.string() + ": labels must be non-negative integers or strings");
      }
    }
    return out;
  }
  for (std::int64_t v : read_label_array_file(path)) {
    if (v < 0) bad_manifest(path.string() + ": negative class label " + std::to_string(v));
    out.push_back(ClassLabel{v});
  }
  return out;
}

TraceSet load_traceset(const std::filesystem::path& manifest_path) {
  const Manifest m = read_manifest(manifest_path);
  const std::filesystem::path base = manifest_path.parent_path();

  std::vector<Matrix> blocks;
  std::vector<LayerSpec> layers;
  std::size_t offset = 0;
  for (const ManifestLayer& l : m.layers) {
    Matrix block = read_array_file(resolve(base, l.file_path));
    if (block.cols() != l.neuron_count) {
      bad_manifest("layer '" + l.name + "' file has " + std::to_string(block.cols()) +
                   " columns, manifest says " + std::to_string(l.neuron_count));
    }
    if (!blocks.empty() && block.rows() != blocks.front().rows()) {
      throw Error(ErrorCode::kRowCountMismatch,
                  "layer '" + l.name + "' has " + std::to_string(block.rows()) +
                      " rows, layer '" + m.layers.front().name + "' has " +
                      std::to_string(blocks.front().rows()));
    }
    layers.push_back(LayerSpec{l.name, l.neuron_count, offset});
    offset += l.neuron_count;
    blocks.push_back(std::move(block));
  }

  const std::size_t rows = blocks.front().rows();
  Matrix values(rows, offset);
  for (std::size_t r = 0; r < rows; ++r) {
    auto dst = values.row(r).begin();
    for (const Matrix& block : blocks) {
      const auto src = block.row(r);
      dst = std::copy(src.begin(), src.end(), dst);
    }
  }

  std::optional<std::vector<ClassLabel>> ground_truth;
  std::optional<std::vector<ClassLabel>> predicted;
  if (m.labels_path) ground_truth = read_label_file(resolve(base, *m.labels_path), m.label_dictionary);
  if (m.predicted_path) predicted = read_label_file(resolve(base, *m.predicted_path), m.label_dictionary);
  return TraceSet(std::move(values), std::move(layers), std::move(ground_truth),
                  std::move(predicted));
}

std::filesystem::path save_traceset(const std::filesystem::path& dir,
                                    const std::string& dataset_name, const TraceSet& traces,
                                    const std::map<std::string, std::int64_t>& label_dictionary) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create '" + dir.string() + "': " + ec.message());

  Manifest m;
  m.dataset_name = dataset_name;
  m.label_dictionary = label_dictionary;
  for (const LayerSpec& layer : traces.layers()) {
    Matrix block(traces.num_inputs(), layer.neuron_count);
    for (std::size_t r = 0; r < traces.num_inputs(); ++r) {
      const auto src = traces.row(r).subspan(layer.offset, layer.neuron_count);
      std::copy(src.begin(), src.end(), block.row(r).begin());
    }
    const std::string file = layer.name + ".npy";
    write_array_file(dir / file, block);
    m.layers.push_back(ManifestLayer{layer.name, file, layer.neuron_count});
  }
  auto write_labels = [&](const std::vector<ClassLabel>& labels, const std::string& file) {
    std::vector<std::int64_t> raw;
    raw.reserve(labels.size());
    for (ClassLabel l : labels) raw.push_back(l.value);
    write_label_array_file(dir / file, raw);
    return file;
  };
  if (traces.ground_truth()) m.labels_path = write_labels(*traces.ground_truth(), "labels.npy");
  if (traces.predicted()) m.predicted_path = write_labels(*traces.predicted(), "predicted.npy");

  const std::filesystem::path manifest_path = dir / "manifest.json";
  write_manifest(manifest_path, m);
  return manifest_path;
}

}  // namespace surprisal
