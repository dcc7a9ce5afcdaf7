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
#ifndef FORGE_TYPES_HPP_
#define FORGE_TYPES_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/geometry.hpp"
#include "forge/jsonx.hpp"

// Shared domain types. All of them are immutable value objects after
// construction and safe to share between concurrent workers.

namespace forge {

// The grounding task families and their REG (referring expression
// generation) reverses. REG variants exist only for the three non-intent
// referring expression types.
enum class TaskType {
  kTextGrounding,
  kBriefDescGrounding,
  kIntentGrounding,
  kFunctionalityGrounding,
  kTextReg,
  kBriefDescReg,
  kFunctionalityReg,
  kWidgetListing,
};

constexpr TaskType kAllTaskTypes[] = {
    TaskType::kTextGrounding,     TaskType::kBriefDescGrounding,
    TaskType::kIntentGrounding,   TaskType::kFunctionalityGrounding,
    TaskType::kTextReg,           TaskType::kBriefDescReg,
    TaskType::kFunctionalityReg,  TaskType::kWidgetListing,
};

const std::string& task_type_name(TaskType t);
TaskType task_type_from_name(const std::string& name);
bool is_reg_task(TaskType t);
bool is_grounding_task(TaskType t);

enum class Platform { kWeb, kMobile, kDesktop };

const std::string& platform_name(Platform p);
Platform platform_from_name(const std::string& name);

// One element from raw GUI metadata. The four referring expression sources
// are alt_text, brief_description, action_intent, and functionality;
// rendered_text and category are auxiliary attributes used by denoising.
struct GuiElement {
  std::string element_id;
  NormBBox bbox;
  bool visible = true;
  std::optional<std::string> alt_text;
  std::optional<std::string> rendered_text;
  std::optional<std::string> category;
  std::optional<std::string> brief_description;
  std::optional<std::string> action_intent;
  std::optional<std::string> functionality;
  json extra = json::object();  // unknown keys, preserved on round trip

  // True when all four RE fields are empty or absent.
  bool blank() const;
};

// One screenshot worth of raw GUI metadata.
struct ScreenshotRecord {
  std::string record_id;
  std::string image_ref;  // file path or opaque URI; never decoded here
  int width_px = 0;
  int height_px = 0;
  std::string source;
  Platform platform = Platform::kWeb;
  std::optional<int> gui_era;  // year; missing means contemporary
  std::vector<GuiElement> elements;
  json extra = json::object();
};

// One <screenshot, referring expression, target coordinates> triplet.
struct GroundingSample {
  std::string sample_id;
  std::string record_id;
  std::string image_ref;
  TaskType task_type = TaskType::kTextGrounding;
  std::string re_text;
  NormBBox target_bbox;
  std::string source;
  bool era_flag = false;  // true when tagged as outdated-GUI provenance
  json extra = json::object();
};

// Per-split accuracy counts inside an EvalReport.
struct SplitStats {
  std::size_t n_samples = 0;
  std::size_t n_correct = 0;
  double accuracy_percent = 0.0;
};

struct EvalReport {
  std::string benchmark;
  std::size_t n_samples = 0;
  std::size_t n_correct = 0;
  double accuracy_percent = 0.0;
  std::map<std::string, SplitStats> splits;
  // Outputs that produced no parseable coordinates and transport failures
  // both count as incorrect; they are tallied separately here.
  std::size_t n_unparseable = 0;
  std::size_t n_transport_failed = 0;
};

}  // namespace forge

#endif  // FORGE_TYPES_HPP_
