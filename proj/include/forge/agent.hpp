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
#ifndef FORGE_AGENT_HPP_
#define FORGE_AGENT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/actions.hpp"
#include "forge/clients.hpp"
#include "forge/jsonx.hpp"

// Offline GUI-agent evaluation: stored trajectories are replayed step by
// step, the agent predicts the next action from (task, screenshot, textual
// history), and a step counts as successful only when the action kind and
// every parameter match the ground truth.

namespace forge {

// One stored trajectory step.
struct AgentStep {
  std::string step_id;
  std::string task_instruction;
  std::string image_ref;
  std::vector<std::string> history;  // textual action history only
  Action gt_action;
  std::optional<NormBBox> gt_bbox;  // present iff gt is click/long_press
  std::optional<std::vector<NormBBox>> som_candidates;

  void validate() const;  // throws validation_error on contract violations
};

AgentStep step_from_json(const json& j);
json step_to_json(const AgentStep& s);
// Fails loudly on unknown GT action kinds instead of dropping steps.
std::vector<AgentStep> load_steps(const std::string& path);

// Whitespace-token multiset F1 over lowercased strings. Both empty -> 1.0,
// exactly one empty -> 0.0.
double token_f1(const std::string& pred, const std::string& gt);

// The per-step success indicator: kinds must match, then click/long_press
// needs the point inside gt_bbox, input_text/open_app needs token F1
// strictly greater than `f1_threshold`, swipe needs direction equality, and
// parameterless kinds match on kind alone. A prediction missing its required
// parameter never matches.
bool match_action(const Action& pred, const AgentStep& step,
                  double f1_threshold);

// 100 * successes / N. Throws validation_error on an empty list.
double step_success_rate(const std::vector<bool>& results);

// Prediction for one step; malformed predictions score as failures.
struct StepPrediction {
  std::optional<Action> action;
  bool malformed = false;
  std::string note;
};

enum class ReMode { kIntent, kFunctionality };

// Two-stage composition: the planner proposes the action; when the action
// needs grounding, the grounder resolves the planner's intent (or
// functionality) description on the same screenshot to a point. Non-grounded
// kinds pass through without a grounder call.
StepPrediction run_two_stage(const AgentStep& step, PlannerClient& planner,
                             GrounderClient& grounder, ReMode re_mode);

// Set-of-marks baseline: the planner picks a 1-based tag out of the step's
// candidate boxes and the action point is that candidate's center. Raises
// config_error when the step carries no candidates.
StepPrediction run_som(const AgentStep& step, PlannerClient& planner);

// Single-model baseline: the planner both plans and emits coordinates.
StepPrediction run_planner_only(const AgentStep& step, PlannerClient& planner);

enum class AgentStrategy { kTwoStage, kSom, kPlannerOnly };

struct AgentEvalOptions {
  AgentStrategy strategy = AgentStrategy::kTwoStage;
  ReMode re_mode = ReMode::kIntent;
  double f1_threshold = 0.5;
  std::size_t workers = 1;
};

struct KindStats {
  std::size_t n_steps = 0;
  std::size_t n_success = 0;
};

struct StepResult {
  std::string step_id;
  bool matched = false;
  bool malformed = false;
  std::string predicted_kind;
  std::string note;
};

struct AgentEvalReport {
  std::size_t n_steps = 0;
  std::size_t n_success = 0;
  double step_sr = 0.0;
  // Steps whose GT action requires element grounding (click/long_press);
  // their success rate is the element grounding accuracy of the agent.
  KindStats grounded;
  double grounded_fraction_percent = 0.0;
  double grounded_success_percent = 0.0;
  std::map<std::string, KindStats> per_kind;
  std::size_t n_malformed = 0;
  std::vector<StepResult> steps;
};

json agent_report_to_json(const AgentEvalReport& r);

// Replays every step with bounded parallel client calls. Per-step failures
// (malformed planner output, grounder misses, transport errors) score false
// and the run proceeds. `grounder` may be null for SoM and planner-only
// strategies.
AgentEvalReport eval_trajectories(const std::vector<AgentStep>& steps,
                                  PlannerClient& planner,
                                  GrounderClient* grounder,
                                  const AgentEvalOptions& options);

}  // namespace forge

#endif  // FORGE_AGENT_HPP_
