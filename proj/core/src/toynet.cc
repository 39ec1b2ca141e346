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

#include "surprisal/toynet.h"

#include <algorithm>
#include <cmath>

#include "surprisal/error.h"
#include "surprisal/manifest.h"
#include "surprisal/rng.h"

namespace surprisal {
namespace {

void activate(Activation act, std::span<double> v) {
  switch (act) {
    case Activation::kRelu:
      for (double& x : v) x = std::max(0.0, x);
      break;
    case Activation::kIdentity:
      break;
    case Activation::kSoftmax: {
      const double top = *std::max_element(v.begin(), v.end());
      double sum = 0.0;
      for (double& x : v) {
        x = std::exp(x - top);
        sum += x;
      }
      for (double& x : v) x /= sum;
      break;
    }
  }
}

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

// Orthonormal directions from Gram-Schmidt on Gaussian vectors, scaled so
// every pair of centers is exactly `separation` apart. With more classes
// than input dimensions the centers are plain Gaussian draws whose expected
// pairwise distance is `separation`.
Matrix draw_centers(Rng& rng, std::size_t n_classes, std::size_t d, double separation) {
  Matrix centers(n_classes, d);
  if (n_classes > d) {
    const double sd = separation / std::sqrt(2.0 * static_cast<double>(d));
    for (double& c : centers.data()) c = sd * rng.normal();
    return centers;
  }
  for (std::size_t i = 0; i < n_classes; ++i) {
    auto row = centers.row(i);
    double norm = 0.0;
    do {
      for (double& v : row) v = rng.normal();
      for (std::size_t j = 0; j < i; ++j) {
        const auto prev = centers.row(j);
        double dot = 0.0;
        for (std::size_t k = 0; k < d; ++k) dot += row[k] * prev[k];
        for (std::size_t k = 0; k < d; ++k) row[k] -= dot * prev[k];
      }
      norm = 0.0;
      for (double v : row) norm += v * v;
      norm = std::sqrt(norm);
    } while (norm < 1e-6);
    for (double& v : row) v /= norm;
  }
  for (double& c : centers.data()) c *= separation / std::sqrt(2.0);
  return centers;
}

}  // namespace

DenseNet::DenseNet(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw Error(ErrorCode::kInvalidArgument, "network has no layers");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const DenseLayer& l = layers_[i];
    if (l.weights.cols() == 0 || l.weights.rows() == 0 || l.bias.size() != l.weights.cols()) {
      throw Error(ErrorCode::kDimensionMismatch, "layer '" + l.name + "' has inconsistent shapes");
    }
    if (i > 0 && layers_[i - 1].weights.cols() != l.weights.rows()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "layer '" + l.name + "' expects " + std::to_string(l.weights.rows()) +
                      " inputs but '" + layers_[i - 1].name + "' produces " +
                      std::to_string(layers_[i - 1].weights.cols()));
    }
    if (l.activation == Activation::kSoftmax && i + 1 != layers_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "softmax is only allowed on the final layer");
    }
    for (double w : l.weights.data()) {
      if (!std::isfinite(w)) throw Error(ErrorCode::kNonFinite, "non-finite weight in '" + l.name + "'");
    }
    for (double b : l.bias) {
      if (!std::isfinite(b)) throw Error(ErrorCode::kNonFinite, "non-finite bias in '" + l.name + "'");
    }
  }
}

TraceSet forward_with_traces(const DenseNet& net, const Matrix& inputs) {
  if (inputs.cols() != net.input_width()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "inputs have " + std::to_string(inputs.cols()) + " features, network expects " +
                    std::to_string(net.input_width()));
  }
  std::vector<LayerSpec> specs;
  std::size_t width = 0;
  for (const DenseLayer& l : net.layers()) {
    if (l.activation == Activation::kSoftmax) continue;
    specs.push_back(LayerSpec{l.name, l.weights.cols(), width});
    width += l.weights.cols();
  }

  Matrix traces(inputs.rows(), width);
  std::vector<ClassLabel> predicted(inputs.rows());
  for (std::size_t r = 0; r < inputs.rows(); ++r) {
    std::vector<double> current(inputs.row(r).begin(), inputs.row(r).end());
    std::size_t offset = 0;
    for (const DenseLayer& l : net.layers()) {
      std::vector<double> next(l.bias);
      for (std::size_t i = 0; i < current.size(); ++i) {
        const auto w = l.weights.row(i);
        for (std::size_t o = 0; o < next.size(); ++o) next[o] += current[i] * w[o];
      }
      activate(l.activation, next);
      if (l.activation != Activation::kSoftmax) {
        std::copy(next.begin(), next.end(), traces.row(r).begin() + static_cast<std::ptrdiff_t>(offset));
        offset += next.size();
      }
      current = std::move(next);
    }
    predicted[r] = ClassLabel{static_cast<std::int64_t>(argmax(current))};
  }
  return TraceSet(std::move(traces), std::move(specs), std::nullopt, std::move(predicted));
}

DenseNet random_net(std::uint64_t seed, std::size_t d_in, const std::vector<std::size_t>& hidden,
                    std::size_t n_classes) {
  Rng rng(seed);
  std::vector<DenseLayer> layers;
  std::size_t in = d_in;
  auto make = [&](std::string name, std::size_t out, Activation act) {
    DenseLayer l;
    l.name = std::move(name);
    l.weights = Matrix(in, out);
    const double scale = std::sqrt(2.0 / static_cast<double>(in));
    for (double& w : l.weights.data()) w = scale * rng.normal();
    l.bias.resize(out);
    for (double& b : l.bias) b = 0.1 * rng.normal();
    l.activation = act;
    in = out;
    return l;
  };
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    layers.push_back(make("dense_" + std::to_string(i + 1), hidden[i], Activation::kRelu));
  }
  layers.push_back(make("output", n_classes, Activation::kSoftmax));
  return DenseNet(std::move(layers));
}

Fixture make_fixture(const FixtureOptions& o) {
  if (o.n_classes < 2 || o.d_in == 0 || o.hidden_sizes.empty() || o.n_train < o.n_classes ||
      o.n_test == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "fixture needs >= 2 classes, a hidden layer, and non-empty splits");
  }
  if (!(o.center_separation > 0.0) || !std::isfinite(o.center_separation)) {
    throw Error(ErrorCode::kInvalidArgument, "center separation must be positive");
  }
  Rng data(mix_seed(o.seed, 0));
  const Matrix centers = draw_centers(data, o.n_classes, o.d_in, o.center_separation);

  auto draw = [&](std::size_t n, std::vector<ClassLabel>& labels) {
    Matrix x(n, o.d_in);
    labels.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t c = r % o.n_classes;
      labels[r] = ClassLabel{static_cast<std::int64_t>(c)};
      for (std::size_t k = 0; k < o.d_in; ++k) x(r, k) = centers(c, k) + data.normal();
    }
    return x;
  };
  std::vector<ClassLabel> train_labels;
  std::vector<ClassLabel> test_labels;
  const Matrix train_x = draw(o.n_train, train_labels);
  const Matrix test_x = draw(o.n_test, test_labels);

  Rng shift(mix_seed(o.seed, 2));
  Matrix perturbed_x = test_x;
  for (std::size_t r = 0; r < o.n_test; ++r) {
    const auto own = static_cast<std::size_t>(test_labels[r].value);
    const std::size_t other =
        (own + 1 + static_cast<std::size_t>(shift.uniform_index(o.n_classes - 1))) % o.n_classes;
    for (std::size_t k = 0; k < o.d_in; ++k) {
      perturbed_x(r, k) += o.perturbation * (centers(other, k) - centers(own, k));
    }
  }

  // Replace the random readout with a nearest-prototype one: the logit of
  // class c is h . m_c - |m_c|^2 / 2, m_c the last hidden trace of center c.
  const DenseNet base = random_net(mix_seed(o.seed, 1), o.d_in, o.hidden_sizes, o.n_classes);
  const TraceSet center_traces = forward_with_traces(base, centers);
  const LayerSpec& last = center_traces.layers().back();
  std::vector<DenseLayer> layers = base.layers();
  DenseLayer& readout = layers.back();
  readout.weights = Matrix(last.neuron_count, o.n_classes);
  readout.bias.assign(o.n_classes, 0.0);
  for (std::size_t c = 0; c < o.n_classes; ++c) {
    const auto m = center_traces.row(c).subspan(last.offset, last.neuron_count);
    double norm2 = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      readout.weights(k, c) = m[k];
      norm2 += m[k] * m[k];
    }
    readout.bias[c] = -0.5 * norm2;
  }
  DenseNet net(std::move(layers));

  auto run = [&](const Matrix& x, std::vector<ClassLabel> truth) {
    TraceSet t = forward_with_traces(net, x);
    Matrix values = t.values();
    std::vector<LayerSpec> specs = t.layers();
    return TraceSet(std::move(values), std::move(specs), std::move(truth), t.predicted());
  };
  TraceSet train = run(train_x, train_labels);
  TraceSet test = run(test_x, test_labels);
  TraceSet perturbed = run(perturbed_x, test_labels);
  return Fixture{std::move(net), std::move(centers), std::move(train), std::move(test),
                 std::move(perturbed)};
}

FixtureFiles write_fixture(const Fixture& fixture, const std::filesystem::path& dir) {
  std::map<std::string, std::int64_t> dictionary;
  for (std::size_t c = 0; c < fixture.centers.rows(); ++c) {
    dictionary.emplace("class_" + std::to_string(c), static_cast<std::int64_t>(c));
  }
  FixtureFiles files;
  files.train_manifest = save_traceset(dir / "train", "toynet-train", fixture.train, dictionary);
  files.test_manifest = save_traceset(dir / "test", "toynet-test", fixture.test, dictionary);
  files.perturbed_manifest =
      save_traceset(dir / "perturbed", "toynet-perturbed", fixture.perturbed, dictionary);
  return files;
}

}  // namespace surprisal
