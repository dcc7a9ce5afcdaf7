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
#include "forge/ingest.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

#include "forge/errors.hpp"
#include "forge/jsonx.hpp"

using namespace forge;

namespace {

const char* kValidLine =
    R"({"record_id":"%ID%","image":"img.png","width":100,"height":200,)"
    R"("platform":"web","elements":[]})";

std::string valid_line(const std::string& id) {
  std::string line = kValidLine;
  return line.replace(line.find("%ID%"), 4, id);
}

GuiElement element(const std::string& id, const NormBBox& box) {
  GuiElement e;
  e.element_id = id;
  e.bbox = box;
  e.visible = true;
  return e;
}

ScreenshotRecord record_with(std::vector<GuiElement> elements) {
  ScreenshotRecord r;
  r.record_id = "rec";
  r.image_ref = "img.png";
  r.width_px = 360;
  r.height_px = 780;
  r.source = "webui";
  r.elements = std::move(elements);
  return r;
}

}  // namespace

TEST_CASE("parse_records on clean and dirty streams") {
  SUBCASE("empty stream yields no records") {
    std::istringstream in("");
    const auto parsed = parse_records(in, "tag");
    CHECK(parsed.records.empty());
    CHECK(parsed.n_malformed == 0);
  }
  SUBCASE("three valid lines yield three records") {
    std::istringstream in(valid_line("a") + "\n" + valid_line("b") + "\n" +
                          valid_line("c") + "\n");
    const auto parsed = parse_records(in, "tag");
    CHECK(parsed.records.size() == 3);
    CHECK(parsed.records[1].record_id == "b");
    CHECK(parsed.records[0].source == "tag");  // tag fills the missing source
  }
  SUBCASE("malformed lines are counted and skipped") {
    std::istringstream in(valid_line("a") + "\nnot json at all\n" +
                          valid_line("b") + "\n");
    const auto parsed = parse_records(in, "tag");
    CHECK(parsed.records.size() == 2);
    CHECK(parsed.n_malformed == 1);
  }
  SUBCASE("schema violations count as malformed too") {
    std::istringstream in(valid_line("a") + "\n" +
                          R"({"record_id":"x","image":"i"})" + "\n" +
                          valid_line("b") + "\n");
    const auto parsed = parse_records(in, "tag");
    CHECK(parsed.records.size() == 2);
    CHECK(parsed.n_malformed == 1);
  }
  SUBCASE("more than half malformed is a format error") {
    std::istringstream in(valid_line("a") + "\nbad\nbad\n");
    CHECK_THROWS_AS(parse_records(in, "tag"), format_error);
  }
  SUBCASE("exactly half malformed is tolerated") {
    std::istringstream in(valid_line("a") + "\nbad\n");
    CHECK(parse_records(in, "tag").n_malformed == 1);
  }
  SUBCASE("unopenable file is an io error") {
    CHECK_THROWS_AS(parse_records_file("/no/such/file.jsonl", "tag"),
                    io_error);
  }
}

TEST_CASE("sample ids are deterministic content hashes") {
  const auto id1 = make_sample_id("rec", "e1", TaskType::kTextGrounding);
  const auto id2 = make_sample_id("rec", "e1", TaskType::kTextGrounding);
  const auto id3 = make_sample_id("rec", "e1", TaskType::kTextReg);
  CHECK(id1 == id2);
  CHECK(id1 != id3);
  CHECK(id1.size() == 32);
  // Separator keeps (ab, c) distinct from (a, bc).
  CHECK(make_sample_id("ab", "c", TaskType::kTextGrounding) !=
        make_sample_id("a", "bc", TaskType::kTextGrounding));
}

TEST_CASE("generate_samples emits one sample per present RE field") {
  GuiElement submit = element("e1", {0.1, 0.1, 0.3, 0.2});
  submit.alt_text = "Submit";
  const auto record = record_with({submit});

  const auto samples = generate_samples(record);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].task_type == TaskType::kTextGrounding);
  CHECK(samples[0].re_text == "Submit");
  CHECK(samples[0].target_bbox == submit.bbox);
  CHECK(samples[0].source == "webui");
  CHECK(samples[0].sample_id ==
        make_sample_id("rec", "e1", TaskType::kTextGrounding));
}

TEST_CASE("multiple REs on one element yield multiple samples") {
  GuiElement e = element("e1", {0.1, 0.1, 0.3, 0.2});
  e.alt_text = "Share";
  e.functionality = "This element enables users to share content";
  const auto samples = generate_samples(record_with({e}));
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].task_type == TaskType::kTextGrounding);
  CHECK(samples[1].task_type == TaskType::kFunctionalityGrounding);
}

TEST_CASE("records without elements yield nothing") {
  CHECK(generate_samples(record_with({})).empty());
  CHECK(generate_reg_samples(record_with({})).empty());
  CHECK_FALSE(generate_widget_listing(record_with({})).has_value());
}

TEST_CASE("sample count equals the sum of present RE fields") {
  std::vector<GuiElement> elements;
  std::size_t expected = 0;
  for (int i = 0; i < 16; ++i) {
    GuiElement e = element("e" + std::to_string(i), {0.1, 0.1, 0.3, 0.2});
    if (i & 1) e.alt_text = "a", ++expected;
    if (i & 2) e.brief_description = "b", ++expected;
    if (i & 4) e.action_intent = "c", ++expected;
    if (i & 8) e.functionality = "d", ++expected;
    elements.push_back(e);
  }
  CHECK(generate_samples(record_with(elements)).size() == expected);
}

TEST_CASE("generation skips invalid-bbox elements and counts them") {
  GuiElement bad = element("bad", {0.5, 0.1, 0.2, 0.2});  // inverted
  bad.alt_text = "x";
  GuiElement degenerate = element("deg", {0.2, 0.2, 0.2, 0.4});  // zero width
  degenerate.alt_text = "y";
  GuiElement good = element("ok", {0.1, 0.1, 0.3, 0.2});
  good.alt_text = "z";

  GenerateStats stats;
  const auto samples =
      generate_samples(record_with({bad, degenerate, good}), {}, &stats);
  REQUIRE(samples.size() == 1);
  CHECK(samples[0].re_text == "z");
  CHECK(stats.n_excluded_invalid_bbox == 2);
  for (const auto& s : samples) {
    CHECK(s.target_bbox.valid());
    CHECK_FALSE(s.target_bbox.degenerate());
  }
}

TEST_CASE("REG reverses exist for every RE type except intent") {
  SUBCASE("intent-only element yields no REG sample") {
    GuiElement e = element("e1", {0.1, 0.1, 0.3, 0.2});
    e.action_intent = "focus on the Password textbox";
    CHECK(generate_reg_samples(record_with({e})).empty());
  }
  SUBCASE("alt-text-only element yields one text REG sample") {
    GuiElement e = element("e1", {0.1, 0.1, 0.3, 0.2});
    e.alt_text = "Login";
    const auto reg = generate_reg_samples(record_with({e}));
    REQUIRE(reg.size() == 1);
    CHECK(reg[0].task_type == TaskType::kTextReg);
    CHECK(reg[0].re_text == "Login");  // the expected generated description
  }
  SUBCASE("all four RE fields yield exactly three REG samples") {
    GuiElement e = element("e1", {0.1, 0.1, 0.3, 0.2});
    e.alt_text = "a";
    e.brief_description = "b";
    e.action_intent = "c";
    e.functionality = "d";
    const auto reg = generate_reg_samples(record_with({e}));
    REQUIRE(reg.size() == 3);
    std::set<TaskType> types;
    for (const auto& s : reg) types.insert(s.task_type);
    CHECK(types == std::set<TaskType>{TaskType::kTextReg,
                                      TaskType::kBriefDescReg,
                                      TaskType::kFunctionalityReg});
  }
}

TEST_CASE("widget listing enumerates visible boxes in document order") {
  SUBCASE("all-invisible record yields none") {
    GuiElement e = element("e1", {0.1, 0.1, 0.2, 0.2});
    e.visible = false;
    CHECK_FALSE(generate_widget_listing(record_with({e})).has_value());
  }
  SUBCASE("two visible of three are listed") {
    GuiElement a = element("a", {0.1, 0.1, 0.2, 0.2});
    GuiElement b = element("b", {0.3, 0.3, 0.4, 0.4});
    b.visible = false;
    GuiElement c = element("c", {0.5, 0.5, 0.6, 0.6});
    const auto listing = generate_widget_listing(record_with({a, b, c}));
    REQUIRE(listing.has_value());
    CHECK(listing->task_type == TaskType::kWidgetListing);
    CHECK(listing->target_bbox == NormBBox{0, 0, 1, 1});
    const json payload = json::parse(listing->re_text);
    REQUIRE(payload.size() == 2);
    CHECK(payload[0] == json::array({0.1, 0.1, 0.2, 0.2}));
    CHECK(payload[1] == json::array({0.5, 0.5, 0.6, 0.6}));
  }
  SUBCASE("single visible element appears as exactly its box") {
    const auto listing = generate_widget_listing(
        record_with({element("only", {0.1, 0.1, 0.2, 0.2})}));
    REQUIRE(listing.has_value());
    CHECK(json::parse(listing->re_text) ==
          json::array({json::array({0.1, 0.1, 0.2, 0.2})}));
  }
}

TEST_CASE("era cutoff stamps the outdated flag onto samples") {
  GuiElement e = element("e1", {0.1, 0.1, 0.3, 0.2});
  e.alt_text = "old button";
  auto record = record_with({e});
  record.gui_era = 2011;

  GenerateOptions opts;
  opts.era_cutoff_year = 2017;
  CHECK(generate_samples(record, opts)[0].era_flag);

  record.gui_era = 2019;
  CHECK_FALSE(generate_samples(record, opts)[0].era_flag);

  record.gui_era.reset();  // missing era means contemporary
  CHECK_FALSE(generate_samples(record, opts)[0].era_flag);

  record.gui_era = 2011;  // no cutoff configured: nothing is flagged
  CHECK_FALSE(generate_samples(record)[0].era_flag);
}

TEST_CASE("generation is deterministic") {
  GuiElement e = element("e1", {0.1, 0.1, 0.3, 0.2});
  e.alt_text = "a";
  e.functionality = "f";
  const auto record = record_with({e});
  const auto first = generate_samples(record);
  const auto second = generate_samples(record);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].sample_id == second[i].sample_id);
    CHECK(first[i].re_text == second[i].re_text);
  }
}
