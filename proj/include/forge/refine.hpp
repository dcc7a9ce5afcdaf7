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
#ifndef FORGE_REFINE_HPP_
#define FORGE_REFINE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "forge/jsonx.hpp"
#include "forge/types.hpp"

// Progressive data refinement: a coarse category-removal stage (REG tasks,
// outdated-GUI provenance) followed by fine per-(source, task type) inclusion
// ratio sweeps driven by a pluggable evaluation callback, ending in core-set
// extraction. The toolkit never trains models; real sweeps call out to an
// external evaluator, tests use synthetic ones.

namespace forge {

struct CoarsePolicy {
  bool drop_reg = false;
  std::set<TaskType> drop_task_types;
  bool drop_outdated = false;
  std::set<std::string> outdated_sources;
  // Record-level helper threshold used when stamping era flags at ingestion;
  // samples themselves carry only the boolean era_flag.
  std::optional<int> era_cutoff_year;

  // drop_task_types plus the three REG types when drop_reg is set.
  std::set<TaskType> effective_drop_set() const;
};

struct CoarseStats {
  std::size_t n_input = 0;
  std::size_t n_dropped_task_type = 0;
  std::size_t n_dropped_outdated = 0;
  std::size_t n_kept = 0;
};

// A (source, task type) bucket identifier.
struct BucketKey {
  std::string source;
  TaskType task_type = TaskType::kTextGrounding;

  std::string canonical() const;
  friend auto operator<=>(const BucketKey&, const BucketKey&) = default;
};

// Per-bucket inclusion ratio table. Buckets without an entry fall back to
// default_ratio.
struct RefinePlan {
  std::map<BucketKey, double> ratios;
  double default_ratio = 1.0;

  double ratio_for(const BucketKey& key) const;
  void validate() const;  // all ratios in [0,1]
};

struct SweepResult {
  RefinePlan plan;
  double metric = 0.0;  // arithmetic mean of per_benchmark values
  std::map<std::string, double> per_benchmark;
  bool failed = false;
  std::string error;
};

// Order-preserving removal of the coarse-stage categories: samples whose
// task type is in the effective drop set, and (when drop_outdated) samples
// that are era-flagged or come from a source listed as outdated.
std::vector<GroundingSample> coarse_filter(
    const std::vector<GroundingSample>& samples, const CoarsePolicy& policy,
    CoarseStats* stats = nullptr);

// Keeps exactly round(ratio * n) samples of every (source, task type) bucket
// of size n, chosen by seeded uniform sampling without replacement over the
// sample_id-sorted bucket. Rounding is half away from zero. Input order is
// preserved. Bucket draws derive from (seed, bucket), so the result does not
// depend on bucket processing order.
std::vector<GroundingSample> extract_subset(
    const std::vector<GroundingSample>& samples, const RefinePlan& plan,
    std::uint64_t seed);

// One-factor-at-a-time sweep: one plan per (source, task type, ratio) with
// every other bucket held at ratio 1.
std::vector<RefinePlan> build_ratio_sweep(
    const std::vector<std::string>& sources,
    const std::vector<TaskType>& task_types,
    const std::vector<double>& ratios);

// Maps a sample subset to a per-benchmark metric map.
using SweepEvaluator = std::function<std::map<std::string, double>(
    const std::vector<GroundingSample>&)>;

// Evaluates every plan's subset (paired: all subsets derive from the same
// seed). Results keep plan order. An evaluator failure marks that result
// failed and the sweep continues.
std::vector<SweepResult> run_sweep(const std::vector<GroundingSample>& samples,
                                   const std::vector<RefinePlan>& plans,
                                   const SweepEvaluator& evaluator,
                                   std::uint64_t seed,
                                   std::size_t workers = 1);

struct CoreSetRule {
  // Sources subject to per-bucket ratio selection. Leave empty to infer the
  // major set from the sources present in the sweep results; all other
  // sources keep every sample (ratio 1).
  std::set<std::string> major_sources;
};

struct CoreSetSelection {
  RefinePlan plan;
  std::vector<GroundingSample> samples;
};

// Composes the core-set plan: per major-source bucket the swept ratio with
// the maximum metric (ties break toward the larger ratio), ratio 1 for
// minor-source buckets. Raises validation_error listing the gaps when a
// major-source bucket present in the data was never swept.
CoreSetSelection select_core_set(const std::vector<GroundingSample>& samples,
                                 const std::vector<SweepResult>& sweep_results,
                                 const CoreSetRule& rule,
                                 std::uint64_t seed);

struct StatsTable {
  std::size_t n_total = 0;
  std::map<TaskType, std::size_t> per_task_type;
  std::map<std::string, std::size_t> per_source;
  double re_length_mean = 0.0;
  double re_length_median = 0.0;
  double box_area_mean = 0.0;
  double box_area_median = 0.0;
};

StatsTable compute_stats(const std::vector<GroundingSample>& samples);
json stats_to_json(const StatsTable& t);

json plan_to_json(const RefinePlan& plan);
RefinePlan plan_from_json(const json& j);
json sweep_result_to_json(const SweepResult& r);
SweepResult sweep_result_from_json(const json& j);

}  // namespace forge

#endif  // FORGE_REFINE_HPP_
