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
#ifndef FORGE_DEDUP_HPP_
#define FORGE_DEDUP_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "forge/types.hpp"

// Redundancy removal: discretize the target boxes to a coarse [0,100] grid,
// clean the referring expressions, group samples that collide on
// (discretized box, cleaned RE, task type), and keep one seeded-random
// representative per group.

namespace forge {

struct DedupKey {
  std::array<int, 4> dbox{};   // each component in [0,100]
  std::string cleaned_re;      // no punctuation, no uppercase letters
  TaskType task_type = TaskType::kTextGrounding;

  // Canonical string form; hashing and map ordering both use it.
  std::string canonical() const;

  friend bool operator==(const DedupKey&, const DedupKey&) = default;
};

// round(coord * 100) with half-away-from-zero rounding, clamped to [0,100].
std::array<int, 4> discretize_bbox(const NormBBox& b);

// Removes Unicode punctuation, lowercases letters, collapses whitespace runs
// to single spaces, and strips leading/trailing whitespace.
std::string clean_re(std::string_view s);

DedupKey dedup_key(const GroundingSample& s);

struct DedupStats {
  std::size_t n_input = 0;
  std::size_t n_groups = 0;
  std::size_t n_kept = 0;
  std::size_t n_dropped = 0;
};

// Keeps exactly one representative per DedupKey group, chosen uniformly by a
// per-group RNG derived from (seed, key) over the group sorted by sample_id.
// The per-group derivation makes the outcome independent of input order and
// of how groups were sharded across workers. Output is sorted by sample_id.
std::vector<GroundingSample> dedup_samples(
    const std::vector<GroundingSample>& samples, std::uint64_t seed,
    DedupStats* stats = nullptr);

}  // namespace forge

#endif  // FORGE_DEDUP_HPP_
