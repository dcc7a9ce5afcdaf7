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

#include <doctest.h>

#include "forge/errors.hpp"

using namespace forge;

namespace {

AgentStep click_step(const std::string& id, const NormBBox& gt) {
  AgentStep s;
  s.step_id = id;
  s.task_instruction = "task for " + id;
  s.image_ref = id + ".png";
  s.gt_action.kind = ActionKind::kClick;
  s.gt_bbox = gt;
  return s;
}

AgentStep text_step(const std::string& id, const std::string& text) {
  AgentStep s;
  s.step_id = id;
  s.task_instruction = "type something";
  s.image_ref = id + ".png";
  s.gt_action.kind = ActionKind::kInputText;
  s.gt_action.text = text;
  return s;
}

Action click_at(double x, double y) {
  Action a;
  a.kind = ActionKind::kClick;
  a.point = NormPoint{x, y};
  return a;
}

}  // namespace

TEST_CASE("token F1 is a multiset overlap measure") {
  CHECK(token_f1("new york", "new york") == 1.0);
  CHECK(token_f1("new york city", "new york") == doctest::Approx(0.8));
  CHECK(token_f1("", "abc") == 0.0);
  CHECK(token_f1("abc", "") == 0.0);
  CHECK(token_f1("", "") == 1.0);
  CHECK(token_f1("New YORK", "new york") == 1.0);  // case-folded
  // Multiset semantics: a duplicated token only matches once.
  CHECK(token_f1("a a", "a") == doctest::Approx(2.0 / 3.0));
  CHECK(token_f1("a b", "c d") == 0.0);
}

TEST_CASE("match_action applies the per-kind parameter rules") {
  SUBCASE("click inside the GT box matches") {
    const auto step = click_step("s", {0.2, 0.2, 0.4, 0.4});
    CHECK(match_action(click_at(0.3, 0.3), step, 0.5));
    CHECK(match_action(click_at(0.2, 0.2), step, 0.5));  // boundary
    CHECK_FALSE(match_action(click_at(0.5, 0.5), step, 0.5));
  }
  SUBCASE("kind mismatch never matches") {
    const auto step = click_step("s", {0.2, 0.2, 0.4, 0.4});
    Action swipe;
    swipe.kind = ActionKind::kSwipe;
    swipe.direction = SwipeDirection::kUp;
    CHECK_FALSE(match_action(swipe, step, 0.5));
  }
  SUBCASE("text F1 must be strictly greater than the threshold") {
    const auto step = text_step("s", "new york");
    Action exact;
    exact.kind = ActionKind::kInputText;
    exact.text = "new york";
    CHECK(match_action(exact, step, 0.5));

    // F1("new", "new york") = 2*1/(1+2) = 2/3 > 0.5.
    Action partial = exact;
    partial.text = "new";
    CHECK(match_action(partial, step, 0.5));

    // F1 exactly equal to the threshold fails: strictly greater.
    Action half = exact;
    half.text = "new jersey city here";  // F1 = 2*1/(4+2) = 1/3
    CHECK_FALSE(match_action(half, step, 1.0 / 3.0));
    CHECK(match_action(half, step, 0.33));
  }
  SUBCASE("swipe matches on direction equality") {
    AgentStep step;
    step.step_id = "s";
    step.image_ref = "s.png";
    step.gt_action.kind = ActionKind::kSwipe;
    step.gt_action.direction = SwipeDirection::kDown;
    Action up;
    up.kind = ActionKind::kSwipe;
    up.direction = SwipeDirection::kUp;
    CHECK_FALSE(match_action(up, step, 0.5));
    up.direction = SwipeDirection::kDown;
    CHECK(match_action(up, step, 0.5));
  }
  SUBCASE("parameterless kinds match on kind alone") {
    AgentStep step;
    step.step_id = "s";
    step.image_ref = "s.png";
    step.gt_action.kind = ActionKind::kNavigateBack;
    Action back;
    back.kind = ActionKind::kNavigateBack;
    CHECK(match_action(back, step, 0.5));
  }
  SUBCASE("a prediction missing its required parameter never matches") {
    const auto step = click_step("s", {0.2, 0.2, 0.4, 0.4});
    Action pointless;
    pointless.kind = ActionKind::kClick;
    CHECK_FALSE(match_action(pointless, step, 0.5));
  }
}

TEST_CASE("step success rate is the paper ratio") {
  CHECK(step_success_rate({true, true, true, true}) == 100.0);
  CHECK(step_success_rate({true, false, false, true}) == 50.0);
  CHECK(step_success_rate(std::vector<bool>(12, false)) == 0.0);
  std::vector<bool> seven_of_twelve(12, false);
  for (int i = 0; i < 7; ++i) seven_of_twelve[i] = true;
  CHECK(step_success_rate(seven_of_twelve) ==
        doctest::Approx(100.0 * 7.0 / 12.0));
  CHECK_THROWS_AS(step_success_rate({}), validation_error);
}

TEST_CASE("two-stage composition closes the loop with an oracle grounder") {
  const auto step = click_step("s1", {0.2, 0.2, 0.4, 0.4});

  ScriptedPlanner planner;
  planner.add_response(
      "s1.png", R"({"action":"click","intent":"tap the search bar"})");
  OracleGrounder grounder;
  grounder.add_answer("s1.png", "tap the search bar", *step.gt_bbox);

  const StepPrediction pred =
      run_two_stage(step, planner, grounder, ReMode::kIntent);
  CHECK_FALSE(pred.malformed);
  REQUIRE(pred.action.has_value());
  CHECK(match_action(*pred.action, step, 0.5));
  CHECK(grounder.calls() == 1);
}

TEST_CASE("non-grounded plans never call the grounder") {
  AgentStep step;
  step.step_id = "s2";
  step.image_ref = "s2.png";
  step.gt_action.kind = ActionKind::kStatusComplete;

  ScriptedPlanner planner;
  planner.add_response("s2.png", R"({"action":"status_complete"})");
  OracleGrounder grounder;

  const StepPrediction pred =
      run_two_stage(step, planner, grounder, ReMode::kIntent);
  CHECK_FALSE(pred.malformed);
  CHECK(pred.action->kind == ActionKind::kStatusComplete);
  CHECK(grounder.calls() == 0);
  CHECK(match_action(*pred.action, step, 0.5));
}

TEST_CASE("functionality mode needs functionality text") {
  const auto step = click_step("s3", {0.2, 0.2, 0.4, 0.4});
  ScriptedPlanner planner;
  planner.add_response("s3.png",
                       R"({"action":"click","intent":"tap it"})");
  OracleGrounder grounder;
  const StepPrediction pred =
      run_two_stage(step, planner, grounder, ReMode::kFunctionality);
  CHECK(pred.malformed);
  CHECK_FALSE(pred.action.has_value());
  CHECK(grounder.calls() == 0);
}

TEST_CASE("grounder transport failures are malformed clicks") {
  const auto step = click_step("s4", {0.2, 0.2, 0.4, 0.4});
  ScriptedPlanner planner;
  planner.add_response("s4.png",
                       R"({"action":"click","intent":"tap it"})");
  ScriptedGrounder grounder;  // no scripted response: raises transport_error
  const StepPrediction pred =
      run_two_stage(step, planner, grounder, ReMode::kIntent);
  CHECK(pred.malformed);
  REQUIRE(pred.action.has_value());
  CHECK(pred.action->kind == ActionKind::kClick);
  CHECK_FALSE(pred.action->point.has_value());
}

TEST_CASE("SoM selects candidates by 1-based tag") {
  auto step = click_step("s5", {0.5, 0.5, 0.6, 0.6});
  step.som_candidates = std::vector<NormBBox>{
      {0.0, 0.0, 0.1, 0.1}, {0.5, 0.5, 0.6, 0.6}, {0.8, 0.8, 0.9, 0.9}};

  SUBCASE("tag 2 of 3 clicks the second candidate's center") {
    ScriptedPlanner planner;
    planner.add_response("s5.png", R"({"action":"click","tag":2})");
    const StepPrediction pred = run_som(step, planner);
    CHECK_FALSE(pred.malformed);
    CHECK(pred.action->point->x == doctest::Approx(0.55));
    CHECK(match_action(*pred.action, step, 0.5));
    CHECK(planner.last_request().candidates.size() == 3);
    CHECK(planner.last_request().mode == PlannerMode::kSom);
  }
  SUBCASE("an out-of-range tag is malformed and scores false") {
    ScriptedPlanner planner;
    planner.add_response("s5.png", R"({"action":"click","tag":9})");
    const StepPrediction pred = run_som(step, planner);
    CHECK(pred.malformed);
  }
  SUBCASE("missing candidates are a configuration error") {
    auto bare = click_step("s5", {0.5, 0.5, 0.6, 0.6});
    ScriptedPlanner planner;
    planner.add_response("s5.png", R"({"action":"click","tag":1})");
    CHECK_THROWS_AS(run_som(bare, planner), config_error);
  }
}

TEST_CASE("planner-only uses the planner's own coordinates") {
  const auto step = click_step("s6", {0.2, 0.2, 0.4, 0.4});
  ScriptedPlanner planner;
  planner.add_response("s6.png", R"({"action":"click","point":[0.3,0.3]})");
  const StepPrediction pred = run_planner_only(step, planner);
  CHECK_FALSE(pred.malformed);
  CHECK(match_action(*pred.action, step, 0.5));
}

TEST_CASE("trajectory evaluation aggregates per kind and per grounded step") {
  // Four steps: two clicks, one input_text, one navigate_back.
  std::vector<AgentStep> steps = {
      click_step("c1", {0.1, 0.1, 0.3, 0.3}),
      click_step("c2", {0.6, 0.6, 0.8, 0.8}),
      text_step("t1", "hello world"),
      {},
  };
  steps[3].step_id = "n1";
  steps[3].task_instruction = "go back";
  steps[3].image_ref = "n1.png";
  steps[3].gt_action.kind = ActionKind::kNavigateBack;

  ScriptedPlanner planner;
  planner.add_response("c1.png",
                       R"({"action":"click","intent":"first target"})");
  planner.add_response("c2.png",
                       R"({"action":"click","intent":"second target"})");
  planner.add_response("t1.png",
                       R"({"action":"input_text","text":"hello world"})");
  planner.add_response("n1.png", R"({"action":"navigate_back"})");

  OracleGrounder grounder;
  grounder.add_answer("c1.png", "first target", *steps[0].gt_bbox);
  // c2 deliberately misses: the oracle answers (0,0).

  AgentEvalOptions options;
  options.strategy = AgentStrategy::kTwoStage;
  options.workers = 1;
  const AgentEvalReport report =
      eval_trajectories(steps, planner, &grounder, options);

  CHECK(report.n_steps == 4);
  CHECK(report.n_success == 3);
  CHECK(report.step_sr == 75.0);
  CHECK(report.grounded.n_steps == 2);
  CHECK(report.grounded.n_success == 1);
  CHECK(report.grounded_success_percent == 50.0);
  CHECK(report.grounded_fraction_percent == 50.0);
  CHECK(report.per_kind.at("click").n_steps == 2);
  CHECK(report.per_kind.at("click").n_success == 1);
  CHECK(report.per_kind.at("input_text").n_success == 1);
  CHECK(report.per_kind.at("navigate_back").n_success == 1);

  // Step SR decomposes exactly as the weighted average of per-kind rates.
  std::size_t weighted = 0;
  for (const auto& [kind, st] : report.per_kind) weighted += st.n_success;
  CHECK(weighted == report.n_success);

  // Deterministic offline replay: a second run produces an identical report.
  const AgentEvalReport again =
      eval_trajectories(steps, planner, &grounder, options);
  CHECK(agent_report_to_json(report) == agent_report_to_json(again));

  // And parallel workers change nothing.
  AgentEvalOptions parallel = options;
  parallel.workers = 4;
  const AgentEvalReport par =
      eval_trajectories(steps, planner, &grounder, parallel);
  CHECK(agent_report_to_json(report) == agent_report_to_json(par));
}

TEST_CASE("a planner that always answers the wrong kind scores zero") {
  std::vector<AgentStep> steps = {click_step("c1", {0.1, 0.1, 0.3, 0.3}),
                                  click_step("c2", {0.4, 0.4, 0.6, 0.6})};
  ScriptedPlanner planner;
  planner.set_default_response(R"({"action":"wait"})");
  OracleGrounder grounder;
  const AgentEvalReport report =
      eval_trajectories(steps, planner, &grounder, {});
  CHECK(report.step_sr == 0.0);
}

TEST_CASE("steps round-trip through the trajectory schema") {
  auto step = click_step("s", {0.2, 0.2, 0.4, 0.4});
  step.history = {"click login", "input_text user"};
  step.som_candidates = std::vector<NormBBox>{{0.2, 0.2, 0.4, 0.4}};
  const AgentStep back = step_from_json(step_to_json(step));
  CHECK(back.step_id == step.step_id);
  CHECK(back.history == step.history);
  CHECK(back.gt_bbox == step.gt_bbox);
  CHECK(back.som_candidates == step.som_candidates);

  auto text = text_step("t", "hi");
  const AgentStep tback = step_from_json(step_to_json(text));
  CHECK(tback.gt_action.text == "hi");
}

TEST_CASE("unknown GT action kinds fail ingestion loudly") {
  json j = {{"step_id", "s"},
            {"task", "t"},
            {"image", "i.png"},
            {"gt_action", {{"kind", "teleport"}}}};
  CHECK_THROWS_WITH_AS(step_from_json(j), doctest::Contains("teleport"),
                       validation_error);
}

TEST_CASE("gt_bbox presence is tied to grounded kinds") {
  json missing_bbox = {{"step_id", "s"},
                       {"task", "t"},
                       {"image", "i.png"},
                       {"gt_action", {{"kind", "click"}}}};
  CHECK_THROWS_AS(step_from_json(missing_bbox), validation_error);

  json stray_bbox = {{"step_id", "s"},
                     {"task", "t"},
                     {"image", "i.png"},
                     {"gt_action", {{"kind", "wait"}}},
                     {"gt_bbox", {0.1, 0.1, 0.2, 0.2}}};
  CHECK_THROWS_AS(step_from_json(stray_bbox), validation_error);
}
