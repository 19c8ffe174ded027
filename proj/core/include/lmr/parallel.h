// Copyright 2026 The lmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LMR_PARALLEL_H_
#define LMR_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace lmr {

/// Worker count: LMR_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t max_threads();

/// Runs body(i) for i in [0, count) on up to max_threads() threads. Tasks
/// must write only to their own slot of a preallocated output, which keeps
/// results independent of scheduling. The first exception thrown by a task
/// is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace lmr

#endif  // LMR_PARALLEL_H_
