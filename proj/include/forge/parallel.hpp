/* Copyright 2026 The Forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef FORGE_PARALLEL_HPP_
#define FORGE_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace forge {

// Runs fn(i) for every i in [0, n) using at most `workers` threads.
// workers <= 1 runs inline on the calling thread. The first exception thrown
// by any invocation is rethrown after all workers drain.
void parallel_for(std::size_t n, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

std::size_t default_workers();

}  // namespace forge

#endif  // FORGE_PARALLEL_HPP_
