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

#include "surprisal/numeric.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace surprisal {

double ordered_sum(std::span<double> values) {
  std::sort(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double log_sum_exp(std::span<double> exponents) {
  if (exponents.empty()) return -std::numeric_limits<double>::infinity();
  std::sort(exponents.begin(), exponents.end());
  const double top = exponents.back();
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double e : exponents) s += std::exp(e - top);
  return top + std::log(s);
}

std::optional<Matrix> cholesky(const Matrix& a, double min_pivot) {
  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = a(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!std::isfinite(pivot) || pivot <= min_pivot) return std::nullopt;
    const double root = std::sqrt(pivot);
    l(j, j) = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / root;
    }
  }
  return l;
}

void forward_substitute(const Matrix& lower, std::span<double> b) {
  const std::size_t n = lower.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= lower(i, k) * b[k];
    b[i] = v / lower(i, i);
  }
}

}  // namespace surprisal
