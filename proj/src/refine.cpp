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
#include "forge/refine.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "forge/errors.hpp"
#include "forge/hashing.hpp"
#include "forge/parallel.hpp"
#include "forge/text.hpp"

namespace forge {

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::size_t rounded_count(double ratio, std::size_t n) {
  return static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(n)));
}

}  // namespace

std::set<TaskType> CoarsePolicy::effective_drop_set() const {
  std::set<TaskType> drop = drop_task_types;
  if (drop_reg) {
    drop.insert(TaskType::kTextReg);
    drop.insert(TaskType::kBriefDescReg);
    drop.insert(TaskType::kFunctionalityReg);
  }
  return drop;
}

std::string BucketKey::canonical() const {
  return source + "|" + task_type_name(task_type);
}

double RefinePlan::ratio_for(const BucketKey& key) const {
  auto it = ratios.find(key);
  return it == ratios.end() ? default_ratio : it->second;
}

void RefinePlan::validate() const {
  auto check = [](double r) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw validation_error("inclusion ratio " + std::to_string(r) +
                             " is outside [0,1]");
    }
  };
  check(default_ratio);
  for (const auto& [key, r] : ratios) check(r);
}

std::vector<GroundingSample> coarse_filter(
    const std::vector<GroundingSample>& samples, const CoarsePolicy& policy,
    CoarseStats* stats) {
  const std::set<TaskType> drop = policy.effective_drop_set();
  std::vector<GroundingSample> kept;
  kept.reserve(samples.size());
  std::size_t n_task = 0, n_outdated = 0;
  for (const auto& s : samples) {
    if (drop.count(s.task_type)) {
      ++n_task;
      continue;
    }
    if (policy.drop_outdated &&
        (s.era_flag || policy.outdated_sources.count(s.source))) {
      ++n_outdated;
      continue;
    }
    kept.push_back(s);
  }
  if (stats != nullptr) {
    stats->n_input = samples.size();
    stats->n_dropped_task_type = n_task;
    stats->n_dropped_outdated = n_outdated;
    stats->n_kept = kept.size();
  }
  return kept;
}

std::vector<GroundingSample> extract_subset(
    const std::vector<GroundingSample>& samples, const RefinePlan& plan,
    std::uint64_t seed) {
  plan.validate();

  // Bucket indices, each sorted by sample_id before drawing.
  std::map<std::string, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    buckets[BucketKey{samples[i].source, samples[i].task_type}.canonical()]
        .push_back(i);
  }

  std::unordered_set<std::size_t> selected;
  selected.reserve(samples.size());
  for (auto& [key, indices] : buckets) {
    std::sort(indices.begin(), indices.end(),
              [&](std::size_t a, std::size_t b) {
                return samples[a].sample_id < samples[b].sample_id;
              });
    const auto& first = samples[indices.front()];
    const double ratio =
        plan.ratio_for(BucketKey{first.source, first.task_type});
    const std::size_t k = rounded_count(ratio, indices.size());
    // Partial Fisher-Yates: the first k slots are a uniform sample without
    // replacement.
    auto rng = keyed_rng(seed, "subset|" + key);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j =
          i + bounded_uniform(rng, indices.size() - i);
      std::swap(indices[i], indices[j]);
      selected.insert(indices[i]);
    }
  }

  std::vector<GroundingSample> out;
  out.reserve(selected.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (selected.count(i)) out.push_back(samples[i]);
  }
  return out;
}

std::vector<RefinePlan> build_ratio_sweep(
    const std::vector<std::string>& sources,
    const std::vector<TaskType>& task_types,
    const std::vector<double>& ratios) {
  if (ratios.empty()) {
    throw validation_error("ratio grid must not be empty");
  }
  for (double r : ratios) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw validation_error("ratio " + std::to_string(r) +
                             " is outside [0,1]");
    }
  }
  std::vector<RefinePlan> plans;
  plans.reserve(sources.size() * task_types.size() * ratios.size());
  for (const auto& source : sources) {
    for (TaskType task : task_types) {
      for (double r : ratios) {
        RefinePlan plan;
        plan.default_ratio = 1.0;
        plan.ratios[BucketKey{source, task}] = r;
        plans.push_back(std::move(plan));
      }
    }
  }
  return plans;
}

std::vector<SweepResult> run_sweep(const std::vector<GroundingSample>& samples,
                                   const std::vector<RefinePlan>& plans,
                                   const SweepEvaluator& evaluator,
                                   std::uint64_t seed, std::size_t workers) {
  std::vector<SweepResult> results(plans.size());
  parallel_for(plans.size(), workers, [&](std::size_t i) {
    SweepResult& r = results[i];
    r.plan = plans[i];
    try {
      const auto subset = extract_subset(samples, plans[i], seed);
      r.per_benchmark = evaluator(subset);
      if (r.per_benchmark.empty()) {
        r.failed = true;
        r.error = "evaluator returned no metrics";
        return;
      }
      std::vector<double> values;
      values.reserve(r.per_benchmark.size());
      for (const auto& [name, v] : r.per_benchmark) values.push_back(v);
      r.metric = mean_of(values);
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
    }
  });
  return results;
}

CoreSetSelection select_core_set(const std::vector<GroundingSample>& samples,
                                 const std::vector<SweepResult>& sweep_results,
                                 const CoreSetRule& rule, std::uint64_t seed) {
  // Candidate (ratio, metric) pairs per swept bucket.
  std::map<BucketKey, std::map<double, double>> candidates;
  std::set<std::string> swept_sources;
  for (const auto& result : sweep_results) {
    if (result.failed) continue;
    for (const auto& [key, ratio] : result.plan.ratios) {
      swept_sources.insert(key.source);
      auto& per_ratio = candidates[key];
      auto it = per_ratio.find(ratio);
      // The same (bucket, ratio) swept twice keeps its best observation.
      if (it == per_ratio.end() || result.metric > it->second) {
        per_ratio[ratio] = result.metric;
      }
    }
  }

  const std::set<std::string>& major =
      rule.major_sources.empty() ? swept_sources : rule.major_sources;

  std::set<BucketKey> data_buckets;
  for (const auto& s : samples) {
    data_buckets.insert(BucketKey{s.source, s.task_type});
  }

  RefinePlan plan;
  plan.default_ratio = 1.0;  // minor sources retain all samples
  std::vector<std::string> gaps;
  for (const auto& bucket : data_buckets) {
    if (!major.count(bucket.source)) continue;
    auto it = candidates.find(bucket);
    if (it == candidates.end() || it->second.empty()) {
      gaps.push_back(bucket.canonical());
      continue;
    }
    // Argmax metric; ties break toward the larger ratio. Entries are
    // ratio-ascending, so >= keeps the largest tied ratio.
    double best_ratio = 0.0;
    double best_metric = -std::numeric_limits<double>::infinity();
    for (const auto& [ratio, metric] : it->second) {
      if (metric >= best_metric) {
        best_metric = metric;
        best_ratio = ratio;
      }
    }
    plan.ratios[bucket] = best_ratio;
  }
  if (!gaps.empty()) {
    std::string msg = "sweep results do not cover major-source buckets:";
    for (const auto& g : gaps) msg += " " + g;
    throw validation_error(msg);
  }

  CoreSetSelection selection;
  selection.samples = extract_subset(samples, plan, seed);
  selection.plan = std::move(plan);
  return selection;
}

StatsTable compute_stats(const std::vector<GroundingSample>& samples) {
  StatsTable t;
  t.n_total = samples.size();
  std::vector<double> re_lengths, areas;
  re_lengths.reserve(samples.size());
  areas.reserve(samples.size());
  for (const auto& s : samples) {
    ++t.per_task_type[s.task_type];
    ++t.per_source[s.source];
    re_lengths.push_back(
        static_cast<double>(utf8_decode(s.re_text).size()));
    areas.push_back(s.target_bbox.area());
  }
  t.re_length_mean = mean_of(re_lengths);
  t.re_length_median = median_of(re_lengths);
  t.box_area_mean = mean_of(areas);
  t.box_area_median = median_of(areas);
  return t;
}

json stats_to_json(const StatsTable& t) {
  json j = json::object();
  j["n_total"] = t.n_total;
  auto pct = [&](std::size_t n) {
    return t.n_total == 0
               ? 0.0
               : 100.0 * static_cast<double>(n) /
                     static_cast<double>(t.n_total);
  };
  json per_task = json::object();
  for (const auto& [task, n] : t.per_task_type) {
    per_task[task_type_name(task)] = {{"count", n}, {"percent", pct(n)}};
  }
  j["per_task_type"] = std::move(per_task);
  json per_source = json::object();
  for (const auto& [source, n] : t.per_source) {
    per_source[source] = {{"count", n}, {"percent", pct(n)}};
  }
  j["per_source"] = std::move(per_source);
  j["re_length"] = {{"mean", t.re_length_mean}, {"median", t.re_length_median}};
  j["box_area"] = {{"mean", t.box_area_mean}, {"median", t.box_area_median}};
  return j;
}

json plan_to_json(const RefinePlan& plan) {
  json ratios = json::object();
  for (const auto& [key, r] : plan.ratios) {
    ratios[key.source][task_type_name(key.task_type)] = r;
  }
  return json{{"default_ratio", plan.default_ratio},
              {"ratios", std::move(ratios)}};
}

RefinePlan plan_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("plan must be an object");
  RefinePlan plan;
  if (auto it = j.find("default_ratio"); it != j.end()) {
    if (!it->is_number()) {
      throw validation_error("plan default_ratio must be a number");
    }
    plan.default_ratio = it->get<double>();
  }
  if (auto it = j.find("ratios"); it != j.end()) {
    if (!it->is_object()) {
      throw validation_error("plan ratios must be an object");
    }
    for (auto src = it->begin(); src != it->end(); ++src) {
      if (!src.value().is_object()) {
        throw validation_error("plan ratios entries must be objects");
      }
      for (auto task = src.value().begin(); task != src.value().end();
           ++task) {
        if (!task.value().is_number()) {
          throw validation_error("plan ratio must be a number");
        }
        plan.ratios[BucketKey{src.key(), task_type_from_name(task.key())}] =
            task.value().get<double>();
      }
    }
  }
  plan.validate();
  return plan;
}

json sweep_result_to_json(const SweepResult& r) {
  json j = json::object();
  j["plan"] = plan_to_json(r.plan);
  j["metric"] = r.metric;
  j["per_benchmark"] = r.per_benchmark;
  j["failed"] = r.failed;
  if (r.failed) j["error"] = r.error;
  return j;
}

SweepResult sweep_result_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("sweep result must be an object");
  SweepResult r;
  auto plan_it = j.find("plan");
  if (plan_it == j.end()) {
    throw validation_error("sweep result is missing 'plan'");
  }
  r.plan = plan_from_json(*plan_it);
  if (auto it = j.find("metric"); it != j.end() && it->is_number()) {
    r.metric = it->get<double>();
  }
  if (auto it = j.find("per_benchmark"); it != j.end() && it->is_object()) {
    for (auto b = it->begin(); b != it->end(); ++b) {
      if (!b.value().is_number()) {
        throw validation_error("per_benchmark values must be numbers");
      }
      r.per_benchmark[b.key()] = b.value().get<double>();
    }
  }
  if (auto it = j.find("failed"); it != j.end() && it->is_boolean()) {
    r.failed = it->get<bool>();
  }
  if (auto it = j.find("error"); it != j.end() && it->is_string()) {
    r.error = it->get<std::string>();
  }
  return r;
}

}  // namespace forge
