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

#include "elda/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace elda {

int worker_count() {
  static const int cached = [] {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("ELDA_THREADS")) {
      char* end = nullptr;
      long cap = std::strtol(env, &end, 10);
      if (end != env && cap >= 1 && cap < 4096) n = std::min<long>(n, cap);
    }
    return n;
  }();
  return cached;
}

void parallel_for(int64_t begin, int64_t end,
                  const std::function<void(int64_t)>& fn) {
  const int64_t count = end - begin;
  if (count <= 0) return;
  const int workers = static_cast<int>(
      std::min<int64_t>(worker_count(), count));
  if (workers <= 1) {
    for (int64_t i = begin; i < end; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next(begin);
  const int64_t chunk = std::max<int64_t>(1, count / (workers * 8));
  auto run = [&] {
    for (;;) {
      int64_t lo = next.fetch_add(chunk);
      if (lo >= end) return;
      int64_t hi = std::min(lo + chunk, end);
      for (int64_t i = lo; i < hi; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers) - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace elda
