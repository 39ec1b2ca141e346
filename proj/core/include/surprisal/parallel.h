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

#ifndef SURPRISAL_PARALLEL_H_
#define SURPRISAL_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace surprisal {

// Worker count: SURPRISAL_THREADS when set to a positive integer, else the
// hardware concurrency.
std::size_t thread_count();

// Calls body(i) for every i in [0, n), spread over thread_count() workers in
// contiguous chunks. `body` must only write state owned by index i.
// The first exception thrown by any worker is rethrown after all finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace surprisal

#endif  // SURPRISAL_PARALLEL_H_
