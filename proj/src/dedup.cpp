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
#include "forge/dedup.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "forge/hashing.hpp"
#include "forge/text.hpp"

namespace forge {

namespace {

int discretize_coord(double c) {
  const long v = std::lround(c * 100.0);  // llround/lround: half away from 0
  return static_cast<int>(std::clamp(v, 0L, 100L));
}

}  // namespace

std::array<int, 4> discretize_bbox(const NormBBox& b) {
  return {discretize_coord(b.x1), discretize_coord(b.y1),
          discretize_coord(b.x2), discretize_coord(b.y2)};
}

std::string clean_re(std::string_view s) {
  std::vector<char32_t> kept;
  kept.reserve(s.size());
  bool pending_space = false;
  for (char32_t cp : utf8_decode(s)) {
    if (is_punct_cp(cp)) continue;
    if (is_space_cp(cp)) {
      pending_space = !kept.empty();
      continue;
    }
    if (pending_space) {
      kept.push_back(U' ');
      pending_space = false;
    }
    kept.push_back(lower_cp(cp));
  }
  return utf8_encode(kept);
}

std::string DedupKey::canonical() const {
  std::string out;
  for (int c : dbox) {
    out += std::to_string(c);
    out += ',';
  }
  out += task_type_name(task_type);
  out += '|';
  out += cleaned_re;
  return out;
}

DedupKey dedup_key(const GroundingSample& s) {
  return DedupKey{discretize_bbox(s.target_bbox), clean_re(s.re_text),
                  s.task_type};
}

std::vector<GroundingSample> dedup_samples(
    const std::vector<GroundingSample>& samples, std::uint64_t seed,
    DedupStats* stats) {
  // Group members are kept as sorted sample_id lists; the representative is
  // a seeded uniform pick over that ordering.
  std::map<std::string, std::vector<const GroundingSample*>> groups;
  for (const auto& s : samples) {
    groups[dedup_key(s).canonical()].push_back(&s);
  }

  std::vector<GroundingSample> kept;
  kept.reserve(groups.size());
  for (auto& [key, members] : groups) {
    std::sort(members.begin(), members.end(),
              [](const GroundingSample* a, const GroundingSample* b) {
                return a->sample_id < b->sample_id;
              });
    auto rng = keyed_rng(seed, key);
    kept.push_back(*members[bounded_uniform(rng, members.size())]);
  }
  std::sort(kept.begin(), kept.end(),
            [](const GroundingSample& a, const GroundingSample& b) {
              return a.sample_id < b.sample_id;
            });

  if (stats != nullptr) {
    stats->n_input = samples.size();
    stats->n_groups = groups.size();
    stats->n_kept = kept.size();
    stats->n_dropped = samples.size() - kept.size();
  }
  return kept;
}

}  // namespace forge
