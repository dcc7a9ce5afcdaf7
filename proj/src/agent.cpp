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
#include "forge/agent.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "forge/errors.hpp"
#include "forge/parallel.hpp"
#include "forge/text.hpp"

namespace forge {

namespace {

NormPoint point_from_json(const json& j, const char* context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw validation_error(std::string(context) +
                           " must be an array of 2 numbers");
  }
  return NormPoint{j[0].get<double>(), j[1].get<double>()};
}

NormBBox bbox_from_json(const json& j, const char* context) {
  if (!j.is_array() || j.size() != 4) {
    throw validation_error(std::string(context) +
                           " must be an array of 4 numbers");
  }
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw validation_error(std::string(context) +
                             " must be an array of 4 numbers");
    }
  }
  return NormBBox{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
                  j[3].get<double>()};
}

StepPrediction malformed_prediction(std::optional<Action> partial,
                                    std::string note) {
  StepPrediction p;
  p.action = std::move(partial);
  p.malformed = true;
  p.note = std::move(note);
  return p;
}

// Carries the planner's non-grounding parameters onto the action. Returns a
// malformed prediction when the kind's required parameter is missing.
StepPrediction finish_action(const PlannerOutput& po,
                             std::optional<NormPoint> resolved_point) {
  Action a;
  a.kind = po.kind;
  if (action_needs_grounding(po.kind)) {
    if (!resolved_point.has_value()) {
      return malformed_prediction(a, "grounded action has no target point");
    }
    a.point = resolved_point;
  } else if (action_takes_text(po.kind)) {
    if (!po.text_param.has_value()) {
      return malformed_prediction(a, "action lacks its text parameter");
    }
    a.text = po.text_param;
  } else if (po.kind == ActionKind::kSwipe) {
    if (!po.direction.has_value()) {
      return malformed_prediction(a, "swipe lacks a direction");
    }
    a.direction = po.direction;
  }
  return StepPrediction{a, false, ""};
}

}  // namespace

void AgentStep::validate() const {
  if (step_id.empty()) throw validation_error("step_id is empty");
  const bool grounded = action_needs_grounding(gt_action.kind);
  if (grounded != gt_bbox.has_value()) {
    throw validation_error("step '" + step_id +
                           "': gt_bbox must be present exactly for "
                           "click/long_press ground truth");
  }
  if (grounded && !gt_bbox->valid()) {
    throw validation_error("step '" + step_id + "': gt_bbox is invalid");
  }
  if (action_takes_text(gt_action.kind) && !gt_action.text.has_value()) {
    throw validation_error("step '" + step_id +
                           "': ground truth lacks its text parameter");
  }
  if (gt_action.kind == ActionKind::kSwipe &&
      !gt_action.direction.has_value()) {
    throw validation_error("step '" + step_id +
                           "': ground truth swipe lacks a direction");
  }
}

AgentStep step_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("step must be an object");
  AgentStep s;
  auto get_string = [&](const char* key, bool required) -> std::string {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      if (required) {
        throw validation_error(std::string("missing or non-string key '") +
                               key + "'");
      }
      return "";
    }
    return it->get<std::string>();
  };
  s.step_id = get_string("step_id", true);
  s.task_instruction = get_string("task", true);
  s.image_ref = get_string("image", true);
  if (auto it = j.find("history"); it != j.end()) {
    if (!it->is_array()) throw validation_error("'history' must be an array");
    for (const auto& h : *it) {
      if (!h.is_string()) {
        throw validation_error("'history' entries must be strings");
      }
      s.history.push_back(h.get<std::string>());
    }
  }
  auto ga = j.find("gt_action");
  if (ga == j.end() || !ga->is_object()) {
    throw validation_error("missing 'gt_action' object");
  }
  auto kind_it = ga->find("kind");
  if (kind_it == ga->end() || !kind_it->is_string()) {
    throw validation_error("gt_action needs a 'kind' string");
  }
  s.gt_action.kind = action_kind_from_name(kind_it->get<std::string>());
  if (auto it = ga->find("point"); it != ga->end() && !it->is_null()) {
    s.gt_action.point = point_from_json(*it, "gt_action.point");
  }
  if (auto it = ga->find("text"); it != ga->end() && !it->is_null()) {
    if (!it->is_string()) {
      throw validation_error("gt_action.text must be a string");
    }
    s.gt_action.text = it->get<std::string>();
  }
  if (auto it = ga->find("direction"); it != ga->end() && !it->is_null()) {
    if (!it->is_string()) {
      throw validation_error("gt_action.direction must be a string");
    }
    s.gt_action.direction =
        swipe_direction_from_name(it->get<std::string>());
  }
  if (auto it = j.find("gt_bbox"); it != j.end() && !it->is_null()) {
    s.gt_bbox = bbox_from_json(*it, "gt_bbox");
  }
  if (auto it = j.find("som_candidates"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw validation_error("'som_candidates' must be an array of boxes");
    }
    std::vector<NormBBox> candidates;
    for (const auto& c : *it) {
      candidates.push_back(bbox_from_json(c, "som_candidates entry"));
    }
    s.som_candidates = std::move(candidates);
  }
  s.validate();
  return s;
}

json step_to_json(const AgentStep& s) {
  json j = json::object();
  j["step_id"] = s.step_id;
  j["task"] = s.task_instruction;
  j["image"] = s.image_ref;
  j["history"] = s.history;
  json ga = json::object();
  ga["kind"] = action_kind_name(s.gt_action.kind);
  if (s.gt_action.point.has_value()) {
    ga["point"] = {s.gt_action.point->x, s.gt_action.point->y};
  }
  if (s.gt_action.text.has_value()) ga["text"] = *s.gt_action.text;
  if (s.gt_action.direction.has_value()) {
    ga["direction"] = swipe_direction_name(*s.gt_action.direction);
  }
  j["gt_action"] = std::move(ga);
  if (s.gt_bbox.has_value()) {
    j["gt_bbox"] = {s.gt_bbox->x1, s.gt_bbox->y1, s.gt_bbox->x2, s.gt_bbox->y2};
  }
  if (s.som_candidates.has_value()) {
    json candidates = json::array();
    for (const auto& b : *s.som_candidates) {
      candidates.push_back(json::array({b.x1, b.y1, b.x2, b.y2}));
    }
    j["som_candidates"] = std::move(candidates);
  }
  return j;
}

std::vector<AgentStep> load_steps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  std::vector<AgentStep> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      out.push_back(step_from_json(json::parse(line)));
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

double token_f1(const std::string& pred, const std::string& gt) {
  const auto pred_tokens = tokenize_lower(pred);
  const auto gt_tokens = tokenize_lower(gt);
  if (pred_tokens.empty() && gt_tokens.empty()) return 1.0;
  if (pred_tokens.empty() || gt_tokens.empty()) return 0.0;
  std::unordered_map<std::string, std::size_t> gt_counts;
  for (const auto& t : gt_tokens) ++gt_counts[t];
  std::size_t overlap = 0;
  for (const auto& t : pred_tokens) {
    auto it = gt_counts.find(t);
    if (it != gt_counts.end() && it->second > 0) {
      ++overlap;
      --it->second;
    }
  }
  return 2.0 * static_cast<double>(overlap) /
         static_cast<double>(pred_tokens.size() + gt_tokens.size());
}

bool match_action(const Action& pred, const AgentStep& step,
                  double f1_threshold) {
  const Action& gt = step.gt_action;
  if (pred.kind != gt.kind) return false;
  if (action_needs_grounding(pred.kind)) {
    if (!pred.point.has_value() || !step.gt_bbox.has_value()) return false;
    return point_in_bbox(*pred.point, *step.gt_bbox);
  }
  if (action_takes_text(pred.kind)) {
    if (!pred.text.has_value() || !gt.text.has_value()) return false;
    return token_f1(*pred.text, *gt.text) > f1_threshold;  // strictly greater
  }
  if (pred.kind == ActionKind::kSwipe) {
    return pred.direction.has_value() && gt.direction.has_value() &&
           *pred.direction == *gt.direction;
  }
  return true;
}

double step_success_rate(const std::vector<bool>& results) {
  if (results.empty()) {
    throw validation_error("step success rate needs at least one step");
  }
  const auto successes =
      static_cast<double>(std::count(results.begin(), results.end(), true));
  return 100.0 * successes / static_cast<double>(results.size());
}

StepPrediction run_two_stage(const AgentStep& step, PlannerClient& planner,
                             GrounderClient& grounder, ReMode re_mode) {
  const PlannerMode mode = re_mode == ReMode::kIntent
                               ? PlannerMode::kTwoStageIntent
                               : PlannerMode::kTwoStageFunctionality;
  std::string raw;
  try {
    raw = planner.plan(
        {step.task_instruction, step.image_ref, step.history, mode, {}});
  } catch (const transport_error& e) {
    return malformed_prediction(std::nullopt,
                                std::string("planner transport error: ") +
                                    e.what());
  }
  const PlannerParse parsed = parse_planner_output(raw, mode);
  if (!parsed.output.has_value()) {
    return malformed_prediction(std::nullopt, parsed.error);
  }
  const PlannerOutput& po = *parsed.output;

  std::optional<NormPoint> point;
  if (action_needs_grounding(po.kind)) {
    const std::string& re = re_mode == ReMode::kIntent
                                ? *po.intent_text
                                : *po.functionality_text;
    std::string grounder_raw;
    try {
      grounder_raw = grounder.ground(step.image_ref, re);
    } catch (const transport_error& e) {
      return malformed_prediction(
          Action{po.kind},
          std::string("grounder transport error: ") + e.what());
    }
    const auto coords = parse_coords(grounder_raw);
    if (!coords.has_value()) {
      return malformed_prediction(Action{po.kind},
                                  "grounder output has no coordinates");
    }
    point = coords->as_point();
  }
  return finish_action(po, point);
}

StepPrediction run_som(const AgentStep& step, PlannerClient& planner) {
  if (!step.som_candidates.has_value() || step.som_candidates->empty()) {
    throw config_error("step '" + step.step_id +
                       "' has no SoM candidates; the som strategy needs "
                       "precomputed candidate boxes");
  }
  std::string raw;
  try {
    raw = planner.plan({step.task_instruction, step.image_ref, step.history,
                        PlannerMode::kSom, *step.som_candidates});
  } catch (const transport_error& e) {
    return malformed_prediction(std::nullopt,
                                std::string("planner transport error: ") +
                                    e.what());
  }
  const PlannerParse parsed = parse_planner_output(raw, PlannerMode::kSom);
  if (!parsed.output.has_value()) {
    return malformed_prediction(std::nullopt, parsed.error);
  }
  const PlannerOutput& po = *parsed.output;

  std::optional<NormPoint> point;
  if (action_needs_grounding(po.kind)) {
    const int tag = *po.som_tag;  // 1-based
    const auto count = static_cast<int>(step.som_candidates->size());
    if (tag < 1 || tag > count) {
      return malformed_prediction(
          Action{po.kind}, "candidate tag " + std::to_string(tag) +
                               " is out of range 1.." + std::to_string(count));
    }
    point = center((*step.som_candidates)[static_cast<std::size_t>(tag - 1)]);
  }
  return finish_action(po, point);
}

StepPrediction run_planner_only(const AgentStep& step,
                                PlannerClient& planner) {
  std::string raw;
  try {
    raw = planner.plan({step.task_instruction, step.image_ref, step.history,
                        PlannerMode::kPlannerOnly, {}});
  } catch (const transport_error& e) {
    return malformed_prediction(std::nullopt,
                                std::string("planner transport error: ") +
                                    e.what());
  }
  const PlannerParse parsed =
      parse_planner_output(raw, PlannerMode::kPlannerOnly);
  if (!parsed.output.has_value()) {
    return malformed_prediction(std::nullopt, parsed.error);
  }
  const PlannerOutput& po = *parsed.output;
  std::optional<NormPoint> point;
  if (action_needs_grounding(po.kind)) point = po.point;
  return finish_action(po, point);
}

json agent_report_to_json(const AgentEvalReport& r) {
  json j = json::object();
  j["n_steps"] = r.n_steps;
  j["n_success"] = r.n_success;
  j["step_sr"] = r.step_sr;
  j["grounded"] = {{"n_steps", r.grounded.n_steps},
                   {"n_success", r.grounded.n_success},
                   {"fraction_percent", r.grounded_fraction_percent},
                   {"success_percent", r.grounded_success_percent}};
  json per_kind = json::object();
  for (const auto& [kind, st] : r.per_kind) {
    per_kind[kind] = {{"n_steps", st.n_steps}, {"n_success", st.n_success}};
  }
  j["per_kind"] = std::move(per_kind);
  j["n_malformed"] = r.n_malformed;
  json steps = json::array();
  for (const auto& s : r.steps) {
    json sj = {{"step_id", s.step_id},
               {"matched", s.matched},
               {"malformed", s.malformed},
               {"predicted_kind", s.predicted_kind}};
    if (!s.note.empty()) sj["note"] = s.note;
    steps.push_back(std::move(sj));
  }
  j["steps"] = std::move(steps);
  return j;
}

AgentEvalReport eval_trajectories(const std::vector<AgentStep>& steps,
                                  PlannerClient& planner,
                                  GrounderClient* grounder,
                                  const AgentEvalOptions& options) {
  if (steps.empty()) {
    throw validation_error("cannot evaluate an empty trajectory");
  }
  for (const auto& s : steps) s.validate();
  if (options.strategy == AgentStrategy::kTwoStage && grounder == nullptr) {
    throw config_error("the two-stage strategy needs a grounder client");
  }

  std::vector<StepPrediction> predictions(steps.size());
  parallel_for(steps.size(), options.workers, [&](std::size_t i) {
    switch (options.strategy) {
      case AgentStrategy::kTwoStage:
        predictions[i] =
            run_two_stage(steps[i], planner, *grounder, options.re_mode);
        break;
      case AgentStrategy::kSom:
        predictions[i] = run_som(steps[i], planner);
        break;
      case AgentStrategy::kPlannerOnly:
        predictions[i] = run_planner_only(steps[i], planner);
        break;
    }
  });

  AgentEvalReport report;
  report.n_steps = steps.size();
  std::vector<bool> outcomes(steps.size(), false);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const AgentStep& step = steps[i];
    const StepPrediction& pred = predictions[i];
    const bool matched = !pred.malformed && pred.action.has_value() &&
                         match_action(*pred.action, step, options.f1_threshold);
    outcomes[i] = matched;
    if (pred.malformed) ++report.n_malformed;
    if (matched) ++report.n_success;

    const std::string gt_kind = action_kind_name(step.gt_action.kind);
    auto& kind_stats = report.per_kind[gt_kind];
    ++kind_stats.n_steps;
    if (matched) ++kind_stats.n_success;
    if (action_needs_grounding(step.gt_action.kind)) {
      ++report.grounded.n_steps;
      if (matched) ++report.grounded.n_success;
    }

    StepResult result;
    result.step_id = step.step_id;
    result.matched = matched;
    result.malformed = pred.malformed;
    result.predicted_kind =
        pred.action.has_value() ? action_kind_name(pred.action->kind) : "";
    result.note = pred.note;
    report.steps.push_back(std::move(result));
  }
  report.step_sr = step_success_rate(outcomes);
  report.grounded_fraction_percent =
      100.0 * static_cast<double>(report.grounded.n_steps) /
      static_cast<double>(report.n_steps);
  report.grounded_success_percent =
      report.grounded.n_steps == 0
          ? 0.0
          : 100.0 * static_cast<double>(report.grounded.n_success) /
                static_cast<double>(report.grounded.n_steps);
  return report;
}

}  // namespace forge
