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

#include <fstream>
#include <istream>

#include "forge/errors.hpp"
#include "forge/hashing.hpp"
#include "forge/jsonl.hpp"

namespace forge {

namespace {

bool has_text(const std::optional<std::string>& f) {
  return f.has_value() && !f->empty();
}

bool usable_target(const NormBBox& b) { return b.valid() && !b.degenerate(); }

bool era_flag_for(const ScreenshotRecord& record,
                  const GenerateOptions& opts) {
  return opts.era_cutoff_year.has_value() && record.gui_era.has_value() &&
         *record.gui_era < *opts.era_cutoff_year;
}

GroundingSample base_sample(const ScreenshotRecord& record,
                            const GuiElement& element, TaskType task,
                            const std::string& re,
                            const GenerateOptions& opts) {
  GroundingSample s;
  s.sample_id = make_sample_id(record.record_id, element.element_id, task);
  s.record_id = record.record_id;
  s.image_ref = record.image_ref;
  s.task_type = task;
  s.re_text = re;
  s.target_bbox = element.bbox;
  s.source = record.source;
  s.era_flag = era_flag_for(record, opts);
  return s;
}

}  // namespace

ParsedRecords parse_records(std::istream& in, const std::string& source_tag) {
  ParsedRecords result;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    ++result.n_lines;
    try {
      ScreenshotRecord r = record_from_json(json::parse(line));
      if (r.source.empty()) r.source = source_tag;
      result.records.push_back(std::move(r));
    } catch (const json::exception&) {
      ++result.n_malformed;
    } catch (const validation_error&) {
      ++result.n_malformed;
    }
  }
  if (in.bad()) throw io_error("record stream became unreadable");
  if (result.n_lines > 0 && result.n_malformed * 2 > result.n_lines) {
    throw format_error("more than half of the input lines are malformed (" +
                       std::to_string(result.n_malformed) + " of " +
                       std::to_string(result.n_lines) + ")");
  }
  return result;
}

ParsedRecords parse_records_file(const std::string& path,
                                 const std::string& source_tag) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path + "' for reading");
  try {
    return parse_records(in, source_tag);
  } catch (const format_error& e) {
    throw format_error(path + ": " + e.what());
  }
}

std::string make_sample_id(const std::string& record_id,
                           const std::string& element_id, TaskType task) {
  std::string payload = record_id;
  payload += '\x1f';
  payload += element_id;
  payload += '\x1f';
  payload += task_type_name(task);
  return fnv1a128_hex(payload);
}

std::vector<GroundingSample> generate_samples(const ScreenshotRecord& record,
                                              const GenerateOptions& opts,
                                              GenerateStats* stats) {
  std::vector<GroundingSample> out;
  for (const auto& e : record.elements) {
    const bool any_re = has_text(e.alt_text) || has_text(e.brief_description) ||
                        has_text(e.action_intent) || has_text(e.functionality);
    if (!any_re) continue;
    if (!usable_target(e.bbox)) {
      if (stats != nullptr) ++stats->n_excluded_invalid_bbox;
      continue;
    }
    if (has_text(e.alt_text)) {
      out.push_back(base_sample(record, e, TaskType::kTextGrounding,
                                *e.alt_text, opts));
    }
    if (has_text(e.brief_description)) {
      out.push_back(base_sample(record, e, TaskType::kBriefDescGrounding,
                                *e.brief_description, opts));
    }
    if (has_text(e.action_intent)) {
      out.push_back(base_sample(record, e, TaskType::kIntentGrounding,
                                *e.action_intent, opts));
    }
    if (has_text(e.functionality)) {
      out.push_back(base_sample(record, e, TaskType::kFunctionalityGrounding,
                                *e.functionality, opts));
    }
  }
  if (stats != nullptr) stats->n_grounding += out.size();
  return out;
}

std::vector<GroundingSample> generate_reg_samples(
    const ScreenshotRecord& record, const GenerateOptions& opts,
    GenerateStats* stats) {
  std::vector<GroundingSample> out;
  for (const auto& e : record.elements) {
    const bool any_reg = has_text(e.alt_text) ||
                         has_text(e.brief_description) ||
                         has_text(e.functionality);
    if (!any_reg) continue;  // intent never yields a REG sample
    if (!usable_target(e.bbox)) {
      if (stats != nullptr) ++stats->n_excluded_invalid_bbox;
      continue;
    }
    if (has_text(e.alt_text)) {
      out.push_back(
          base_sample(record, e, TaskType::kTextReg, *e.alt_text, opts));
    }
    if (has_text(e.brief_description)) {
      out.push_back(base_sample(record, e, TaskType::kBriefDescReg,
                                *e.brief_description, opts));
    }
    if (has_text(e.functionality)) {
      out.push_back(base_sample(record, e, TaskType::kFunctionalityReg,
                                *e.functionality, opts));
    }
  }
  if (stats != nullptr) stats->n_reg += out.size();
  return out;
}

std::optional<GroundingSample> generate_widget_listing(
    const ScreenshotRecord& record, const GenerateOptions& opts,
    GenerateStats* stats) {
  json boxes = json::array();
  for (const auto& e : record.elements) {
    if (!e.visible) continue;
    if (!usable_target(e.bbox)) {
      if (stats != nullptr) ++stats->n_excluded_invalid_bbox;
      continue;
    }
    boxes.push_back(
        json::array({e.bbox.x1, e.bbox.y1, e.bbox.x2, e.bbox.y2}));
  }
  if (boxes.empty()) return std::nullopt;

  GroundingSample s;
  s.sample_id =
      make_sample_id(record.record_id, "", TaskType::kWidgetListing);
  s.record_id = record.record_id;
  s.image_ref = record.image_ref;
  s.task_type = TaskType::kWidgetListing;
  s.re_text = boxes.dump();
  s.target_bbox = NormBBox{0.0, 0.0, 1.0, 1.0};
  s.source = record.source;
  s.era_flag = era_flag_for(record, opts);
  if (stats != nullptr) ++stats->n_widget_listing;
  return s;
}

}  // namespace forge
