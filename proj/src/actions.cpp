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
#include "forge/actions.hpp"

#include <array>

#include "forge/errors.hpp"

namespace forge {

namespace {

const std::array<std::string, 10> kActionNames = {
    "click",         "long_press",      "input_text",        "swipe",
    "navigate_home", "navigate_back",   "open_app",          "status_complete",
    "status_impossible", "wait",
};

const std::array<std::string, 4> kDirectionNames = {"up", "down", "left",
                                                    "right"};

const std::array<std::string, 4> kModeNames = {
    "two-stage-intent", "two-stage-functionality", "som", "planner-only"};

}  // namespace

const std::string& action_kind_name(ActionKind k) {
  return kActionNames[static_cast<std::size_t>(k)];
}

ActionKind action_kind_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == name) return static_cast<ActionKind>(i);
  }
  throw validation_error("unknown action kind: '" + name + "'");
}

bool action_needs_grounding(ActionKind k) {
  return k == ActionKind::kClick || k == ActionKind::kLongPress;
}

bool action_takes_text(ActionKind k) {
  return k == ActionKind::kInputText || k == ActionKind::kOpenApp;
}

const std::string& swipe_direction_name(SwipeDirection d) {
  return kDirectionNames[static_cast<std::size_t>(d)];
}

SwipeDirection swipe_direction_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kDirectionNames.size(); ++i) {
    if (kDirectionNames[i] == name) return static_cast<SwipeDirection>(i);
  }
  throw validation_error("unknown swipe direction: '" + name + "'");
}

const std::string& planner_mode_name(PlannerMode m) {
  return kModeNames[static_cast<std::size_t>(m)];
}

bool Action::well_formed() const {
  if (action_needs_grounding(kind)) {
    return point.has_value() && !text.has_value() && !direction.has_value();
  }
  if (action_takes_text(kind)) {
    return text.has_value() && !point.has_value() && !direction.has_value();
  }
  if (kind == ActionKind::kSwipe) {
    return direction.has_value() && !point.has_value() && !text.has_value();
  }
  return !point.has_value() && !text.has_value() && !direction.has_value();
}

}  // namespace forge
