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
#include "forge/types.hpp"

#include <array>

#include "forge/errors.hpp"

namespace forge {

namespace {

const std::array<std::string, 8> kTaskNames = {
    "text_grounding",     "brief_desc_grounding", "intent_grounding",
    "functionality_grounding", "text_reg",        "brief_desc_reg",
    "functionality_reg",  "widget_listing",
};

const std::array<std::string, 3> kPlatformNames = {"web", "mobile", "desktop"};

}  // namespace

const std::string& task_type_name(TaskType t) {
  return kTaskNames[static_cast<std::size_t>(t)];
}

TaskType task_type_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kTaskNames.size(); ++i) {
    if (kTaskNames[i] == name) return static_cast<TaskType>(i);
  }
  throw validation_error("unknown task type: '" + name + "'");
}

bool is_reg_task(TaskType t) {
  return t == TaskType::kTextReg || t == TaskType::kBriefDescReg ||
         t == TaskType::kFunctionalityReg;
}

bool is_grounding_task(TaskType t) {
  return t == TaskType::kTextGrounding || t == TaskType::kBriefDescGrounding ||
         t == TaskType::kIntentGrounding ||
         t == TaskType::kFunctionalityGrounding;
}

const std::string& platform_name(Platform p) {
  return kPlatformNames[static_cast<std::size_t>(p)];
}

Platform platform_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kPlatformNames.size(); ++i) {
    if (kPlatformNames[i] == name) return static_cast<Platform>(i);
  }
  throw validation_error("unknown platform: '" + name + "'");
}

bool GuiElement::blank() const {
  auto empty = [](const std::optional<std::string>& s) {
    return !s.has_value() || s->empty();
  };
  return empty(alt_text) && empty(brief_description) && empty(action_intent) &&
         empty(functionality);
}

}  // namespace forge
