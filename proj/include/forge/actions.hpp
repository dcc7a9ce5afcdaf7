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
#ifndef FORGE_ACTIONS_HPP_
#define FORGE_ACTIONS_HPP_

#include <optional>
#include <string>

#include "forge/geometry.hpp"

// The atomic agent action vocabulary (the union observed across the mobile
// GUI agent benchmarks this toolkit ingests) and the structured planner
// output composed into actions.

namespace forge {

enum class ActionKind {
  kClick,
  kLongPress,
  kInputText,
  kSwipe,
  kNavigateHome,
  kNavigateBack,
  kOpenApp,
  kStatusComplete,
  kStatusImpossible,
  kWait,
};

const std::string& action_kind_name(ActionKind k);
ActionKind action_kind_from_name(const std::string& name);

// click and long_press carry a point resolved by a grounder.
bool action_needs_grounding(ActionKind k);
// input_text and open_app carry a text parameter matched by token F1.
bool action_takes_text(ActionKind k);

enum class SwipeDirection { kUp, kDown, kLeft, kRight };

const std::string& swipe_direction_name(SwipeDirection d);
SwipeDirection swipe_direction_from_name(const std::string& name);

// Discriminated agent action. The optional field required by the kind must
// be present and the others absent; validate() enforces that.
struct Action {
  ActionKind kind = ActionKind::kClick;
  std::optional<NormPoint> point;          // click, long_press
  std::optional<std::string> text;         // input_text, open_app
  std::optional<SwipeDirection> direction;  // swipe

  // True when the parameter required by `kind` is present and no stray
  // parameter is set.
  bool well_formed() const;
};

// How the planner endpoint is prompted and how its output is interpreted.
enum class PlannerMode {
  kTwoStageIntent,
  kTwoStageFunctionality,
  kSom,
  kPlannerOnly,
};

const std::string& planner_mode_name(PlannerMode m);

// Structured fields extracted from a planner response. Grounded kinds carry
// intent_text or functionality_text (two-stage), som_tag (SoM), or a direct
// point (planner-only baseline).
struct PlannerOutput {
  ActionKind kind = ActionKind::kClick;
  std::optional<std::string> intent_text;
  std::optional<std::string> functionality_text;
  std::optional<std::string> text_param;
  std::optional<SwipeDirection> direction;
  std::optional<int> som_tag;  // 1-based candidate tag
  std::optional<NormPoint> point;
};

}  // namespace forge

#endif  // FORGE_ACTIONS_HPP_
