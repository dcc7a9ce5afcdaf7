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
#include "forge/jsonl.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "forge/errors.hpp"

namespace forge {

namespace {

// Everything not in `known` goes into `extra`, keeping original order.
json collect_extra(const json& j, std::initializer_list<const char*> known) {
  std::set<std::string> known_set;
  for (const char* k : known) known_set.insert(k);
  json extra = json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known_set.count(it.key())) extra[it.key()] = it.value();
  }
  return extra;
}

void append_extra(json& j, const json& extra) {
  for (auto it = extra.begin(); it != extra.end(); ++it) {
    j[it.key()] = it.value();
  }
}

std::string require_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw validation_error(std::string("missing or non-string key '") + key +
                           "'");
  }
  return it->get<std::string>();
}

int require_positive_int(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number_integer()) {
    throw validation_error(std::string("missing or non-integer key '") + key +
                           "'");
  }
  const int v = it->get<int>();
  if (v <= 0) {
    throw validation_error(std::string("key '") + key +
                           "' must be positive, got " + std::to_string(v));
  }
  return v;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw validation_error(std::string("key '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

NormBBox bbox_from_json(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != 4) {
    throw validation_error(std::string("key '") + key +
                           "' must be an array of 4 numbers");
  }
  for (const auto& v : *it) {
    if (!v.is_number()) {
      throw validation_error(std::string("key '") + key +
                             "' must be an array of 4 numbers");
    }
  }
  return NormBBox{(*it)[0].get<double>(), (*it)[1].get<double>(),
                  (*it)[2].get<double>(), (*it)[3].get<double>()};
}

json bbox_to_json(const NormBBox& b) {
  return json::array({b.x1, b.y1, b.x2, b.y2});
}

void set_optional(json& j, const char* key,
                  const std::optional<std::string>& v) {
  if (v.has_value()) j[key] = *v;
}

template <typename T>
std::vector<T> read_lines(std::istream& in, T (*from_json_fn)(const json&)) {
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      out.push_back(from_json_fn(json::parse(line)));
    } catch (const json::exception& e) {
      throw validation_error("line " + std::to_string(line_no) +
                             ": invalid JSON: " + e.what());
    } catch (const validation_error& e) {
      throw validation_error("line " + std::to_string(line_no) + ": " +
                             e.what());
    }
  }
  if (in.bad()) throw io_error("stream became unreadable");
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

json element_to_json(const GuiElement& e) {
  json j = json::object();
  j["id"] = e.element_id;
  j["bbox"] = bbox_to_json(e.bbox);
  j["visible"] = e.visible;
  set_optional(j, "alt_text", e.alt_text);
  set_optional(j, "rendered_text", e.rendered_text);
  set_optional(j, "category", e.category);
  set_optional(j, "brief_description", e.brief_description);
  set_optional(j, "action_intent", e.action_intent);
  set_optional(j, "functionality", e.functionality);
  append_extra(j, e.extra);
  return j;
}

GuiElement element_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("element must be an object");
  GuiElement e;
  e.element_id = require_string(j, "id");
  if (e.element_id.empty()) throw validation_error("element id is empty");
  e.bbox = bbox_from_json(j, "bbox");
  auto vis = j.find("visible");
  if (vis != j.end()) {
    if (!vis->is_boolean()) {
      throw validation_error("element key 'visible' must be a boolean");
    }
    e.visible = vis->get<bool>();
  }
  e.alt_text = optional_string(j, "alt_text");
  e.rendered_text = optional_string(j, "rendered_text");
  e.category = optional_string(j, "category");
  e.brief_description = optional_string(j, "brief_description");
  e.action_intent = optional_string(j, "action_intent");
  e.functionality = optional_string(j, "functionality");
  e.extra = collect_extra(
      j, {"id", "bbox", "visible", "alt_text", "rendered_text", "category",
          "brief_description", "action_intent", "functionality"});
  return e;
}

json record_to_json(const ScreenshotRecord& r) {
  json j = json::object();
  j["record_id"] = r.record_id;
  j["image"] = r.image_ref;
  j["width"] = r.width_px;
  j["height"] = r.height_px;
  j["source"] = r.source;
  j["platform"] = platform_name(r.platform);
  if (r.gui_era.has_value()) j["era"] = *r.gui_era;
  json elems = json::array();
  for (const auto& e : r.elements) elems.push_back(element_to_json(e));
  j["elements"] = std::move(elems);
  append_extra(j, r.extra);
  return j;
}

ScreenshotRecord record_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("record must be an object");
  ScreenshotRecord r;
  r.record_id = require_string(j, "record_id");
  if (r.record_id.empty()) throw validation_error("record_id is empty");
  r.image_ref = require_string(j, "image");
  r.width_px = require_positive_int(j, "width");
  r.height_px = require_positive_int(j, "height");
  if (auto s = optional_string(j, "source")) r.source = *s;
  if (auto p = optional_string(j, "platform")) {
    r.platform = platform_from_name(*p);
  }
  auto era = j.find("era");
  if (era != j.end() && !era->is_null()) {
    if (!era->is_number_integer()) {
      throw validation_error("key 'era' must be an integer year");
    }
    r.gui_era = era->get<int>();
  }
  auto elems = j.find("elements");
  if (elems != j.end()) {
    if (!elems->is_array()) {
      throw validation_error("key 'elements' must be an array");
    }
    std::set<std::string> seen_ids;
    for (const auto& ej : *elems) {
      GuiElement e = element_from_json(ej);
      if (!seen_ids.insert(e.element_id).second) {
        throw validation_error("duplicate element id '" + e.element_id + "'");
      }
      r.elements.push_back(std::move(e));
    }
  }
  r.extra = collect_extra(j, {"record_id", "image", "width", "height",
                              "source", "platform", "era", "elements"});
  return r;
}

json sample_to_json(const GroundingSample& s) {
  json j = json::object();
  j["sample_id"] = s.sample_id;
  j["record_id"] = s.record_id;
  j["image"] = s.image_ref;
  j["task_type"] = task_type_name(s.task_type);
  j["re"] = s.re_text;
  j["bbox"] = bbox_to_json(s.target_bbox);
  j["source"] = s.source;
  j["era_flag"] = s.era_flag;
  append_extra(j, s.extra);
  return j;
}

GroundingSample sample_from_json(const json& j) {
  if (!j.is_object()) throw validation_error("sample must be an object");
  GroundingSample s;
  s.sample_id = require_string(j, "sample_id");
  if (s.sample_id.empty()) throw validation_error("sample_id is empty");
  s.record_id = require_string(j, "record_id");
  s.image_ref = require_string(j, "image");
  s.task_type = task_type_from_name(require_string(j, "task_type"));
  s.re_text = require_string(j, "re");
  if (s.re_text.empty() && is_grounding_task(s.task_type)) {
    throw validation_error("empty 're' for grounding task type");
  }
  s.target_bbox = bbox_from_json(j, "bbox");
  if (auto src = optional_string(j, "source")) s.source = *src;
  auto era = j.find("era_flag");
  if (era != j.end()) {
    if (!era->is_boolean()) {
      throw validation_error("key 'era_flag' must be a boolean");
    }
    s.era_flag = era->get<bool>();
  }
  s.extra = collect_extra(j, {"sample_id", "record_id", "image", "task_type",
                              "re", "bbox", "source", "era_flag"});
  return s;
}

json eval_report_to_json(const EvalReport& r) {
  json j = json::object();
  j["benchmark"] = r.benchmark;
  j["n_samples"] = r.n_samples;
  j["n_correct"] = r.n_correct;
  j["accuracy_percent"] = r.accuracy_percent;
  json splits = json::object();
  for (const auto& [name, st] : r.splits) {
    splits[name] = {{"n_samples", st.n_samples},
                    {"n_correct", st.n_correct},
                    {"accuracy_percent", st.accuracy_percent}};
  }
  j["splits"] = std::move(splits);
  j["n_unparseable"] = r.n_unparseable;
  j["n_transport_failed"] = r.n_transport_failed;
  return j;
}

std::vector<GroundingSample> read_samples_jsonl(std::istream& in) {
  return read_lines<GroundingSample>(in, &sample_from_json);
}

std::vector<GroundingSample> load_samples(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_samples_jsonl(in);
  } catch (const validation_error& e) {
    throw validation_error(path + ": " + e.what());
  }
}

void write_samples_jsonl(std::ostream& out,
                         const std::vector<GroundingSample>& samples) {
  for (const auto& s : samples) out << sample_to_json(s).dump() << '\n';
}

void save_samples(const std::string& path,
                  const std::vector<GroundingSample>& samples) {
  auto out = open_output(path);
  write_samples_jsonl(out, samples);
  if (!out) throw io_error("failed writing '" + path + "'");
}

std::vector<ScreenshotRecord> read_records_jsonl(std::istream& in) {
  return read_lines<ScreenshotRecord>(in, &record_from_json);
}

std::vector<ScreenshotRecord> load_records(const std::string& path) {
  auto in = open_input(path);
  try {
    return read_records_jsonl(in);
  } catch (const validation_error& e) {
    throw validation_error(path + ": " + e.what());
  }
}

void write_records_jsonl(std::ostream& out,
                         const std::vector<ScreenshotRecord>& records) {
  for (const auto& r : records) out << record_to_json(r).dump() << '\n';
}

void save_records(const std::string& path,
                  const std::vector<ScreenshotRecord>& records) {
  auto out = open_output(path);
  write_records_jsonl(out, records);
  if (!out) throw io_error("failed writing '" + path + "'");
}

}  // namespace forge
