// Copyright 2026 The mcsvm Authors.
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

#ifndef MCSVM_SRC_PARALLEL_HPP_
#define MCSVM_SRC_PARALLEL_HPP_

#include <chrono>
#include <cstddef>

namespace mcsvm::detail {

/// Runs fn(0..count-1) on up to `workers` OpenMP threads. Tasks are
/// handed out dynamically; callers must not rely on task-to-thread mapping.
template <class F>
void parallel_for(std::size_t workers, std::size_t count, F&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1) num_threads(static_cast<int>(workers))
  for (long long i = 0; i < n; ++i) fn(static_cast<std::size_t>(i));
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// alpha += step with exact landing on the box bounds.
inline void apply_step(double& alpha, double step, double C) {
  if (step == C - alpha) {
    alpha = C;
  } else if (step == -alpha) {
    alpha = 0.0;
  } else {
    alpha += step;
  }
}

}  // namespace mcsvm::detail

#endif  // MCSVM_SRC_PARALLEL_HPP_
