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
#include "forge/grounding_eval.hpp"

#include <fstream>

#include "forge/errors.hpp"
#include "forge/parallel.hpp"

namespace forge {

namespace {

std::optional<std::string> first_string(const json& j,
                                        std::initializer_list<const char*>
                                            keys) {
  for (const char* key : keys) {
    auto it = j.find(key);
    if (it != j.end() && it->is_string()) return it->get<std::string>();
  }
  return std::nullopt;
}

}  // namespace

BenchmarkSample benchmark_sample_from_json(const json& j) {
  if (!j.is_object()) {
    throw validation_error("benchmark sample must be an object");
  }
  BenchmarkSample s;
  auto image = first_string(j, {"image", "img_filename", "img_url"});
  if (!image.has_value()) {
    throw validation_error("benchmark sample has no image reference");
  }
  s.image_ref = *image;
  auto prompt = first_string(j, {"prompt", "instruction", "re"});
  if (!prompt.has_value() || prompt->empty()) {
    throw validation_error("benchmark sample has no prompt");
  }
  s.prompt = *prompt;
  auto bbox = j.find("bbox");
  if (bbox == j.end() || !bbox->is_array() || bbox->size() != 4) {
    throw validation_error("benchmark sample needs a 4-element 'bbox'");
  }
  s.gt_bbox = NormBBox{(*bbox)[0].get<double>(), (*bbox)[1].get<double>(),
                       (*bbox)[2].get<double>(), (*bbox)[3].get<double>()};
  if (!s.gt_bbox.valid()) {
    throw validation_error("benchmark sample bbox is not a valid normalized "
                           "box");
  }
  s.split = first_string(j, {"split", "platform", "domain"});
  return s;
}

json benchmark_sample_to_json(const BenchmarkSample& s) {
  json j = json::object();
  j["image"] = s.image_ref;
  j["prompt"] = s.prompt;
  j["bbox"] = {s.gt_bbox.x1, s.gt_bbox.y1, s.gt_bbox.x2, s.gt_bbox.y2};
  if (s.split.has_value()) j["split"] = *s.split;
  return j;
}

std::vector<BenchmarkSample> load_benchmark(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::vector<BenchmarkSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      out.push_back(benchmark_sample_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw validation_error(path + ": line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what());
    } catch (const validation_error& e) {
      throw validation_error(path + ": line " + std::to_string(line_no) +
                             ": " + e.what());
    }
  }
  return out;
}

EvalReport eval_grounding(const std::vector<BenchmarkSample>& samples,
                          GrounderClient& grounder,
                          const GroundingEvalOptions& options) {
  if (samples.empty()) {
    throw validation_error("cannot evaluate an empty benchmark");
  }

  enum class Outcome { kCorrect, kIncorrect, kUnparseable, kFailed };
  std::vector<Outcome> outcomes(samples.size());
  parallel_for(samples.size(), options.workers, [&](std::size_t i) {
    const BenchmarkSample& s = samples[i];
    std::string raw;
    try {
      raw = grounder.ground(s.image_ref, s.prompt);
    } catch (const transport_error&) {
      outcomes[i] = Outcome::kFailed;
      return;
    }
    const auto coords = parse_coords(raw, options.over_one_scale);
    if (!coords.has_value()) {
      outcomes[i] = Outcome::kUnparseable;
      return;
    }
    outcomes[i] = point_in_bbox(coords->as_point(), s.gt_bbox)
                      ? Outcome::kCorrect
                      : Outcome::kIncorrect;
  });

  EvalReport report;
  report.benchmark = options.benchmark_name;
  report.n_samples = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& split = report.splits[samples[i].split.value_or("")];
    ++split.n_samples;
    switch (outcomes[i]) {
      case Outcome::kCorrect:
        ++report.n_correct;
        ++split.n_correct;
        break;
      case Outcome::kUnparseable:
        ++report.n_unparseable;
        break;
      case Outcome::kFailed:
        ++report.n_transport_failed;
        break;
      case Outcome::kIncorrect:
        break;
    }
  }
  if (report.n_transport_failed == report.n_samples) {
    throw transport_error("grounder failed for every benchmark sample");
  }
  report.accuracy_percent = 100.0 * static_cast<double>(report.n_correct) /
                            static_cast<double>(report.n_samples);
  for (auto& [name, split] : report.splits) {
    split.accuracy_percent =
        split.n_samples == 0
            ? 0.0
            : 100.0 * static_cast<double>(split.n_correct) /
                  static_cast<double>(split.n_samples);
  }
  return report;
}

std::unique_ptr<OracleGrounder> make_benchmark_oracle(
    const std::vector<BenchmarkSample>& s) {
  auto oracle = std::make_unique<OracleGrounder>();
  for (const auto& sample : s) {
    oracle->add_answer(sample.image_ref, sample.prompt, sample.gt_bbox);
  }
  return oracle;
}

}  // namespace forge
