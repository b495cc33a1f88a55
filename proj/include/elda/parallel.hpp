// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ELDA_PARALLEL_HPP_
#define ELDA_PARALLEL_HPP_

#include <cstdint>
#include <functional>

namespace elda {

// Worker count for data-parallel sections: hardware concurrency capped by the
// ELDA_THREADS environment variable (1 disables threading).
int worker_count();

// Runs fn(i) for i in [begin, end) over disjoint index chunks. Results must be
// written to per-index slots so the outcome is independent of scheduling.
void parallel_for(int64_t begin, int64_t end,
                  const std::function<void(int64_t)>& fn);

}  // namespace elda

#endif  // ELDA_PARALLEL_HPP_
