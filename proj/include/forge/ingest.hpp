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
#ifndef FORGE_INGEST_HPP_
#define FORGE_INGEST_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "forge/types.hpp"

// Expands raw GUI-metadata records into grounding samples: one grounding
// sample per present RE field, REG reverses for all RE types except action
// intent, and one widget-listing sample per record with visible elements.

namespace forge {

struct ParsedRecords {
  std::vector<ScreenshotRecord> records;
  std::size_t n_lines = 0;      // non-blank lines seen
  std::size_t n_malformed = 0;  // skipped, not fatal
};

// Lenient newline-delimited JSON reader for third-party metadata. Malformed
// lines are counted and skipped. Raises io_error when the stream cannot be
// read and format_error when more than half of the lines are malformed.
// Records that carry no source tag inherit `source_tag`.
ParsedRecords parse_records(std::istream& in, const std::string& source_tag);
ParsedRecords parse_records_file(const std::string& path,
                                 const std::string& source_tag);

struct GenerateOptions {
  // When set, records with gui_era earlier than this year produce samples
  // with era_flag = true. Missing gui_era means contemporary.
  std::optional<int> era_cutoff_year;
};

struct GenerateStats {
  std::size_t n_grounding = 0;
  std::size_t n_reg = 0;
  std::size_t n_widget_listing = 0;
  // Elements skipped because their bbox is out of range or degenerate;
  // generated samples never carry such a target.
  std::size_t n_excluded_invalid_bbox = 0;
};

// Deterministic content-hash id: identical (record, element, task) triples
// produce identical ids across runs and shards.
std::string make_sample_id(const std::string& record_id,
                           const std::string& element_id, TaskType task);

// One grounding sample per present RE field per element (alt_text ->
// text grounding, brief_description -> brief-description grounding,
// action_intent -> intent grounding, functionality -> functionality
// grounding). Element document order is preserved.
std::vector<GroundingSample> generate_samples(const ScreenshotRecord& record,
                                              const GenerateOptions& opts = {},
                                              GenerateStats* stats = nullptr);

// REG reverses for all RE types except intent: the sample's `re` holds the
// expected description and the target bbox is the prompt location.
std::vector<GroundingSample> generate_reg_samples(
    const ScreenshotRecord& record, const GenerateOptions& opts = {},
    GenerateStats* stats = nullptr);

// One widget-listing sample per record with at least one visible element.
// The payload (stored in `re`) is a JSON array of the visible elements'
// boxes in document order; the target is the full-image box.
std::optional<GroundingSample> generate_widget_listing(
    const ScreenshotRecord& record, const GenerateOptions& opts = {},
    GenerateStats* stats = nullptr);

}  // namespace forge

#endif  // FORGE_INGEST_HPP_
