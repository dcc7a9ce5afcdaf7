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
#ifndef FORGE_JSONL_HPP_
#define FORGE_JSONL_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "forge/jsonx.hpp"
#include "forge/types.hpp"

// JSONL schema, one object per line.
//
// GroundingSample keys:
//   sample_id, record_id, image, task_type, re, bbox (array of 4 normalized
//   floats), source, era_flag
// ScreenshotRecord keys:
//   record_id, image, width, height, source, platform, era, elements[]
// with element keys:
//   id, bbox, visible, alt_text, rendered_text, category, brief_description,
//   action_intent, functionality
//
// Unknown keys are preserved on round trip (carried in the `extra` member of
// each type and re-emitted after the schema keys, in original order).

namespace forge {

json element_to_json(const GuiElement& e);
GuiElement element_from_json(const json& j);

json record_to_json(const ScreenshotRecord& r);
// Throws validation_error describing the first schema violation.
ScreenshotRecord record_from_json(const json& j);

json sample_to_json(const GroundingSample& s);
GroundingSample sample_from_json(const json& j);

json eval_report_to_json(const EvalReport& r);

// Strict readers for files this toolkit produced itself: any malformed line
// raises validation_error with its line number. The lenient reader for raw
// third-party metadata lives in ingest.hpp.
std::vector<GroundingSample> read_samples_jsonl(std::istream& in);
std::vector<GroundingSample> load_samples(const std::string& path);
void write_samples_jsonl(std::ostream& out,
                         const std::vector<GroundingSample>& samples);
void save_samples(const std::string& path,
                  const std::vector<GroundingSample>& samples);

std::vector<ScreenshotRecord> read_records_jsonl(std::istream& in);
std::vector<ScreenshotRecord> load_records(const std::string& path);
void write_records_jsonl(std::ostream& out,
                         const std::vector<ScreenshotRecord>& records);
void save_records(const std::string& path,
                  const std::vector<ScreenshotRecord>& records);

}  // namespace forge

#endif  // FORGE_JSONL_HPP_
