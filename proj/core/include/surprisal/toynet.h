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

#ifndef SURPRISAL_TOYNET_H_
#define SURPRISAL_TOYNET_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "surprisal/trace.h"

namespace surprisal {

enum class Activation { kRelu, kIdentity, kSoftmax };

struct DenseLayer {
  std::string name;
  Matrix weights;  // in x out
  std::vector<double> bias;
  Activation activation = Activation::kRelu;
};

// Feed-forward stack of dense layers. Only the last layer may use softmax.
class DenseNet {
 public:
  // Throws kDimensionMismatch when consecutive shapes do not chain and
  // kNonFinite on non-finite parameters.
  explicit DenseNet(std::vector<DenseLayer> layers);

  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
  std::size_t input_width() const { return layers_.front().weights.rows(); }
  std::size_t output_width() const { return layers_.back().weights.cols(); }

 private:
  std::vector<DenseLayer> layers_;
};

// Post-activation values of every non-softmax layer become trace columns,
// one trace layer per network layer. The predicted label is the argmax of
// the final layer's output, ties to the lowest index.
TraceSet forward_with_traces(const DenseNet& net, const Matrix& inputs);

// Seeded random network: He-scaled ReLU hidden layers named dense_1..,
// then a random softmax layer named "output", `n_classes` wide.
DenseNet random_net(std::uint64_t seed, std::size_t d_in, const std::vector<std::size_t>& hidden,
                    std::size_t n_classes);

struct FixtureOptions {
  std::uint64_t seed = 0;
  std::size_t n_train = 1000;
  std::size_t n_test = 500;
  std::size_t n_classes = 2;
  std::size_t d_in = 8;
  std::vector<std::size_t> hidden_sizes = {32, 16};
  // Distance between any two class centers, in units of the per-coordinate
  // noise. Centers lie on a seeded random orthonormal frame when n_classes
  // <= d_in; samples scatter around them with unit standard deviation.
  double center_separation = 8.0;
  // Perturbed inputs move this fraction of the way toward another class's
  // center.
  double perturbation = 0.5;
};

struct Fixture {
  DenseNet net;
  Matrix centers;  // n_classes x d_in
  TraceSet train;
  TraceSet test;       // clean
  TraceSet perturbed;  // test inputs pushed toward other-class centers
};

// Gaussian class clusters run through a seeded network whose readout
// scores each class by closeness of the last hidden layer to that class
// center's own hidden trace. Fully determined by the options.
Fixture make_fixture(const FixtureOptions& options);

struct FixtureFiles {
  std::filesystem::path train_manifest;
  std::filesystem::path test_manifest;
  std::filesystem::path perturbed_manifest;
};

// Writes train/, test/ and perturbed/ trace directories under `dir`.
FixtureFiles write_fixture(const Fixture& fixture, const std::filesystem::path& dir);

}  // namespace surprisal

#endif  // SURPRISAL_TOYNET_H_
