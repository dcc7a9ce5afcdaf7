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
#ifndef FORGE_DENOISE_HPP_
#define FORGE_DENOISE_HPP_

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "forge/types.hpp"

// Element-level denoising, applied to records before sample generation:
//   a) drop invisible elements and elements whose RE fields are all blank,
//   b) drop elements with invalid bounding boxes (out of range, inverted,
//      or zero area),
//   c) drop plain-text elements whose recognized on-screen text does not
//      match their text attribute.
// Each filter is idempotent and the three commute on elements they all keep.

namespace forge {

struct DenoiseStats {
  std::size_t n_blank_invisible = 0;
  std::size_t n_invalid_bbox = 0;
  std::size_t n_ocr_mismatch = 0;
  std::size_t n_ocr_unavailable = 0;  // recognizer had no answer; kept
  std::size_t n_kept = 0;
};

// Text recognition capability. Implementations must be deterministic for
// identical inputs within one run. Returns std::nullopt when recognition is
// unavailable for the region (the element is then kept).
class TextRecognizer {
 public:
  virtual ~TextRecognizer() = default;
  virtual std::optional<std::string> recognize(const std::string& image_ref,
                                               const PixelBox& box_px) = 0;
  // Implementations unsafe for concurrent calls return false; the pipeline
  // then serializes calls to them.
  virtual bool thread_safe() const { return false; }
};

ScreenshotRecord filter_blank_invisible(const ScreenshotRecord& record,
                                        DenoiseStats* stats = nullptr);

ScreenshotRecord filter_invalid_bbox(const ScreenshotRecord& record,
                                     DenoiseStats* stats = nullptr);

// Applies the OCR-mismatch rule to plain-text elements (category names a
// text-like kind and alt_text is present). The recognized and attribute
// strings are cleaned like dedup REs before computing edit-distance
// similarity; elements below `threshold` are dropped. A recognizer failure
// on one element counts as unavailable and keeps the element.
ScreenshotRecord filter_ocr_mismatch(const ScreenshotRecord& record,
                                     TextRecognizer& recognizer,
                                     double threshold,
                                     DenoiseStats* stats = nullptr);

// All three rules in order; `recognizer` may be null to skip the OCR rule.
ScreenshotRecord denoise_record(const ScreenshotRecord& record,
                                TextRecognizer* recognizer, double threshold,
                                DenoiseStats* stats = nullptr);

// True when `category` marks a plain-text element (paragraphs, headings,
// labels, ...), the population the OCR rule applies to.
bool is_plain_text_category(const std::optional<std::string>& category);

// Exact-match oracle: answers from the records' own rendered_text fields,
// keyed by (image_ref, pixel box). The default recognizer for tests.
class OracleRecognizer : public TextRecognizer {
 public:
  explicit OracleRecognizer(const std::vector<ScreenshotRecord>& records);
  std::optional<std::string> recognize(const std::string& image_ref,
                                       const PixelBox& box_px) override;
  bool thread_safe() const override { return true; }

 private:
  std::unordered_map<std::string, std::optional<std::string>> index_;
};

// Adapter for an external OCR tool spoken to over a subprocess pipe with
// line-delimited JSON: request {"image":..., "bbox_px":[x1,y1,x2,y2]} ->
// response {"text": "..."} ("text": null means unavailable).
class ExternalRecognizer : public TextRecognizer {
 public:
  explicit ExternalRecognizer(const std::string& command);
  ~ExternalRecognizer() override;
  ExternalRecognizer(const ExternalRecognizer&) = delete;
  ExternalRecognizer& operator=(const ExternalRecognizer&) = delete;

  std::optional<std::string> recognize(const std::string& image_ref,
                                       const PixelBox& box_px) override;

 private:
  long pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
};

}  // namespace forge

#endif  // FORGE_DENOISE_HPP_
