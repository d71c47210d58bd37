// Copyright 2026 The pmimask Authors.
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

#ifndef PMIMASK_PARALLEL_H_
#define PMIMASK_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace pmimask {

// Runs fn(i) for i in [0, num_tasks) on up to `num_threads` workers. Tasks
// are claimed dynamically; callers must make results independent of which
// worker runs which task. Exceptions from fn are rethrown on the caller.
void ParallelFor(size_t num_tasks, int num_threads,
                 const std::function<void(size_t)>& fn);

int DefaultThreadCount();

}  // namespace pmimask

#endif  // PMIMASK_PARALLEL_H_
