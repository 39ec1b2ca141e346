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

#ifndef SURPRISAL_NUMERIC_H_
#define SURPRISAL_NUMERIC_H_

#include <optional>
#include <span>
#include <vector>

#include "surprisal/trace.h"

namespace surprisal {

// Sum of `values` after sorting them ascending. The result depends only on
// the multiset of inputs, not their order.
double ordered_sum(std::span<double> values);

// log(sum(exp(x_i))) with the maximum factored out. Terms are sorted before
// accumulation, so the result is invariant to input order. Returns -inf for
// an empty span or when every term is -inf.
double log_sum_exp(std::span<double> exponents);

// Lower-triangular L with L * L^T = a. Returns nullopt when a pivot is not
// finite or falls below `min_pivot` (compared before the square root).
std::optional<Matrix> cholesky(const Matrix& a, double min_pivot);

// Solves L * y = b in place for lower-triangular L.
void forward_substitute(const Matrix& lower, std::span<double> b);

}  // namespace surprisal

#endif  // SURPRISAL_NUMERIC_H_
