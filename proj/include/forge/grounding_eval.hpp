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
#ifndef FORGE_GROUNDING_EVAL_HPP_
#define FORGE_GROUNDING_EVAL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "forge/clients.hpp"
#include "forge/jsonx.hpp"
#include "forge/types.hpp"

// Grounding accuracy: the percentage of benchmark samples whose predicted
// point falls within the ground-truth box (boundary inclusive). Models that
// answer with a box are scored by its center.

namespace forge {

struct BenchmarkSample {
  std::string image_ref;
  std::string prompt;  // the referring expression
  NormBBox gt_bbox;
  std::optional<std::string> split;  // e.g. mobile/desktop/web
};

// Accepts the native keys {image, prompt, bbox, split} plus the common
// aliases {img_filename, instruction, platform/domain} so that public
// benchmark dumps convert with a one-line jq at most.
BenchmarkSample benchmark_sample_from_json(const json& j);
json benchmark_sample_to_json(const BenchmarkSample& s);
std::vector<BenchmarkSample> load_benchmark(const std::string& path);

struct GroundingEvalOptions {
  std::string benchmark_name;
  std::size_t workers = 1;
  OverOneScale over_one_scale = OverOneScale::kThousandths;
};

// Queries the grounder once per sample and scores point-in-box accuracy.
// Unparseable outputs and per-sample transport failures count as incorrect
// (tallied separately), so N always matches the benchmark size. Raises
// validation_error on an empty benchmark and transport_error when every
// sample failed to reach the endpoint.
EvalReport eval_grounding(const std::vector<BenchmarkSample>& samples,
                          GrounderClient& grounder,
                          const GroundingEvalOptions& options = {});

// Oracle closure over a benchmark: answers every prompt with the GT center.
std::unique_ptr<OracleGrounder> make_benchmark_oracle(
    const std::vector<BenchmarkSample>& s);

}  // namespace forge

#endif  // FORGE_GROUNDING_EVAL_HPP_
