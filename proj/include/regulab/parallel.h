// Copyright 2026 The Regulab Authors.
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

#ifndef REGULAB_PARALLEL_H_
#define REGULAB_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace regulab {

// Worker cap: set_worker_count() if called with n > 0, otherwise the
// REGULAB_THREADS environment variable, otherwise hardware concurrency.
std::size_t worker_count();
void set_worker_count(std::size_t n);

// Runs body(i) for i in [0, count). Results must be written by index so the
// output does not depend on scheduling. If several calls throw, the exception
// from the lowest index is rethrown.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t)>& body);

}  // namespace regulab

#endif  // REGULAB_PARALLEL_H_
