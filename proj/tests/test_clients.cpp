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
#include "forge/clients.hpp"

#include <doctest.h>

#include <random>

#include "forge/errors.hpp"

using namespace forge;

TEST_CASE("parse_coords reads points and boxes out of raw model text") {
  SUBCASE("plain point") {
    const auto c = parse_coords("(0.31, 0.72)");
    REQUIRE(c.has_value());
    REQUIRE(c->point.has_value());
    CHECK(c->point->x == doctest::Approx(0.31));
    CHECK(c->point->y == doctest::Approx(0.72));
  }
  SUBCASE("bare comma pair") {
    const auto c = parse_coords("0.25,0.5");
    REQUIRE(c.has_value());
    CHECK(c->point.has_value());
  }
  SUBCASE("thousandths box is renormalized") {
    const auto c = parse_coords("[100, 200, 300, 400]",
                                OverOneScale::kThousandths);
    REQUIRE(c.has_value());
    REQUIRE(c->box.has_value());
    CHECK(c->box->x1 == doctest::Approx(0.1));
    CHECK(c->box->y1 == doctest::Approx(0.2));
    CHECK(c->box->x2 == doctest::Approx(0.3));
    CHECK(c->box->y2 == doctest::Approx(0.4));
  }
  SUBCASE("percent convention divides by 100") {
    const auto c = parse_coords("(31, 72)", OverOneScale::kPercent);
    REQUIRE(c.has_value());
    CHECK(c->point->x == doctest::Approx(0.31));
  }
  SUBCASE("prose around the tuple is tolerated") {
    const auto c = parse_coords("The target element is at (0.4, 0.6).");
    REQUIRE(c.has_value());
    CHECK(c->point->x == doctest::Approx(0.4));
  }
  SUBCASE("refusals and prose without tuples fail") {
    CHECK_FALSE(parse_coords("I cannot find it").has_value());
    CHECK_FALSE(parse_coords("").has_value());
    CHECK_FALSE(parse_coords("x = 0.3").has_value());  // arity 1
    CHECK_FALSE(parse_coords("1, 2, 3").has_value());  // arity 3
  }
  SUBCASE("values outside the scale range fail") {
    CHECK_FALSE(parse_coords("(-0.2, 0.5)").has_value());
    CHECK_FALSE(
        parse_coords("(1200, 500)", OverOneScale::kThousandths).has_value());
  }
  SUBCASE("an inverted box fails") {
    CHECK_FALSE(parse_coords("[0.5, 0.5, 0.2, 0.6]").has_value());
  }
  SUBCASE("a box answer scores by its center") {
    const auto c = parse_coords("[0.2, 0.2, 0.4, 0.6]");
    REQUIRE(c.has_value());
    const NormPoint p = c->as_point();
    CHECK(p.x == doctest::Approx(0.3));
    CHECK(p.y == doctest::Approx(0.4));
  }
}

TEST_CASE("canonical formatting round-trips within 1e-6") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const NormPoint p{unit(rng), unit(rng)};
    const auto cp = parse_coords(format_point(p));
    REQUIRE(cp.has_value());
    REQUIRE(cp->point.has_value());
    CHECK(cp->point->x == doctest::Approx(p.x).epsilon(1e-6));
    CHECK(cp->point->y == doctest::Approx(p.y).epsilon(1e-6));

    double x1 = unit(rng), x2 = unit(rng), y1 = unit(rng), y2 = unit(rng);
    if (x1 > x2) std::swap(x1, x2);
    if (y1 > y2) std::swap(y1, y2);
    const NormBBox b{x1, y1, x2, y2};
    const auto cb = parse_coords(format_bbox(b));
    REQUIRE(cb.has_value());
    REQUIRE(cb->box.has_value());
    CHECK(cb->box->x1 == doctest::Approx(b.x1).epsilon(1e-6));
    CHECK(cb->box->y2 == doctest::Approx(b.y2).epsilon(1e-6));
  }
}

TEST_CASE("parse_planner_output extracts the JSON action block") {
  SUBCASE("click with intent") {
    const auto p = parse_planner_output(
        R"({"action":"click","intent":"tap the search bar"})",
        PlannerMode::kTwoStageIntent);
    REQUIRE(p.output.has_value());
    CHECK(p.output->kind == ActionKind::kClick);
    CHECK(p.output->intent_text == "tap the search bar");
  }
  SUBCASE("input_text with its text parameter") {
    const auto p = parse_planner_output(
        R"({"action":"input_text","text":"New York"})",
        PlannerMode::kTwoStageIntent);
    REQUIRE(p.output.has_value());
    CHECK(p.output->kind == ActionKind::kInputText);
    CHECK(p.output->text_param == "New York");
  }
  SUBCASE("SoM tag") {
    const auto p = parse_planner_output(R"({"action":"click","tag":3})",
                                        PlannerMode::kSom);
    REQUIRE(p.output.has_value());
    CHECK(p.output->som_tag == 3);
  }
  SUBCASE("free-form rationale around the block is ignored") {
    const auto p = parse_planner_output(
        "Let me think. The search bar is on top.\n"
        R"({"action":"click","intent":"tap the search bar"})"
        "\nDone.",
        PlannerMode::kTwoStageIntent);
    REQUIRE(p.output.has_value());
    CHECK(p.output->intent_text == "tap the search bar");
  }
  SUBCASE("no JSON block is malformed") {
    const auto p =
        parse_planner_output("click the button", PlannerMode::kTwoStageIntent);
    CHECK_FALSE(p.output.has_value());
    CHECK(!p.error.empty());
  }
  SUBCASE("grounded kind without the mode's grounding field is malformed") {
    CHECK_FALSE(parse_planner_output(R"({"action":"click","intent":"x"})",
                                     PlannerMode::kTwoStageFunctionality)
                    .output.has_value());
    CHECK_FALSE(parse_planner_output(R"({"action":"click"})",
                                     PlannerMode::kSom)
                    .output.has_value());
    CHECK_FALSE(parse_planner_output(R"({"action":"long_press"})",
                                     PlannerMode::kPlannerOnly)
                    .output.has_value());
  }
  SUBCASE("planner-only mode reads a direct point") {
    const auto p = parse_planner_output(
        R"({"action":"click","point":[0.4,0.25]})", PlannerMode::kPlannerOnly);
    REQUIRE(p.output.has_value());
    REQUIRE(p.output->point.has_value());
    CHECK(p.output->point->x == doctest::Approx(0.4));
  }
  SUBCASE("unknown action kinds are malformed") {
    CHECK_FALSE(parse_planner_output(R"({"action":"teleport"})",
                                     PlannerMode::kTwoStageIntent)
                    .output.has_value());
  }
  SUBCASE("swipe direction comes through") {
    const auto p = parse_planner_output(
        R"({"action":"swipe","direction":"up"})", PlannerMode::kTwoStageIntent);
    REQUIRE(p.output.has_value());
    CHECK(p.output->direction == SwipeDirection::kUp);
  }
}

TEST_CASE("the oracle grounder closes loops and misses on demand") {
  OracleGrounder oracle;
  oracle.add_answer("img1.png", "the search bar", {0.2, 0.0, 0.8, 0.1});
  oracle.add_image_answer("img2.png", {0.4, 0.4, 0.6, 0.6});

  const auto hit = parse_coords(oracle.ground("img1.png", "the search bar"));
  REQUIRE(hit.has_value());
  CHECK(hit->point->x == doctest::Approx(0.5));
  CHECK(hit->point->y == doctest::Approx(0.05));

  // Fallback by image when the exact RE is unknown.
  const auto by_image = parse_coords(oracle.ground("img2.png", "whatever"));
  CHECK(by_image->point->x == doctest::Approx(0.5));

  // Unknown queries answer with the miss point.
  const auto miss = parse_coords(oracle.ground("img9.png", "nothing"));
  CHECK(miss->point->x == 0.0);

  // Forced misses override known answers.
  oracle.force_miss("img1.png");
  const auto forced = parse_coords(oracle.ground("img1.png", "the search bar"));
  CHECK(forced->point->x == 0.0);

  CHECK(oracle.calls() == 4);
}

TEST_CASE("scripted clients replay responses and count calls") {
  ScriptedGrounder grounder;
  grounder.add_response("img.png", "button", "(0.5, 0.5)");
  CHECK(grounder.ground("img.png", "button") == "(0.5, 0.5)");
  CHECK_THROWS_AS(grounder.ground("img.png", "unknown"), transport_error);
  grounder.set_default_response("(0, 0)");
  CHECK(grounder.ground("img.png", "unknown") == "(0, 0)");
  CHECK(grounder.calls() == 3);

  ScriptedPlanner planner;
  planner.add_response("img.png", R"({"action":"wait"})");
  PlannerRequest request;
  request.task = "do something";
  request.image_ref = "img.png";
  request.mode = PlannerMode::kSom;
  CHECK(planner.plan(request) == R"({"action":"wait"})");
  CHECK(planner.last_request().mode == PlannerMode::kSom);
  CHECK(planner.calls() == 1);
}

TEST_CASE("URL parsing splits host and path") {
  const ParsedUrl u1 = parse_http_url("http://localhost:8080/generate");
  CHECK(u1.scheme_host_port == "http://localhost:8080");
  CHECK(u1.path == "/generate");
  const ParsedUrl u2 = parse_http_url("http://model-host:9000");
  CHECK(u2.path == "/");
  CHECK_THROWS_AS(parse_http_url("https://secure:443/x"), config_error);
  CHECK_THROWS_AS(parse_http_url("ftp://nope"), config_error);
}

TEST_CASE("base64 encoding matches known vectors") {
  CHECK(base64_encode("") == "");
  CHECK(base64_encode("f") == "Zg==");
  CHECK(base64_encode("fo") == "Zm8=");
  CHECK(base64_encode("foo") == "Zm9v");
  CHECK(base64_encode("foobar") == "Zm9vYmFy");
}
