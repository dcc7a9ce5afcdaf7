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
#include "forge/denoise.hpp"

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cmath>
#include <cstring>
#include <set>

#include "forge/dedup.hpp"
#include "forge/errors.hpp"
#include "forge/jsonx.hpp"
#include "forge/text.hpp"

namespace forge {

namespace {

std::string pixel_key(const std::string& image_ref, const PixelBox& box) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "|%.6f,%.6f,%.6f,%.6f", box[0], box[1],
                box[2], box[3]);
  return image_ref + buf;
}

const std::set<std::string>& text_categories() {
  static const std::set<std::string> kCategories = {
      "text", "statictext", "static text", "plaintext", "plain text",
      "paragraph", "heading", "label",
  };
  return kCategories;
}

}  // namespace

bool is_plain_text_category(const std::optional<std::string>& category) {
  if (!category.has_value()) return false;
  return text_categories().count(clean_re(*category)) > 0;
}

ScreenshotRecord filter_blank_invisible(const ScreenshotRecord& record,
                                        DenoiseStats* stats) {
  ScreenshotRecord out = record;
  out.elements.clear();
  for (const auto& e : record.elements) {
    if (!e.visible || e.blank()) {
      if (stats != nullptr) ++stats->n_blank_invisible;
      continue;
    }
    out.elements.push_back(e);
  }
  if (stats != nullptr) stats->n_kept = out.elements.size();
  return out;
}

ScreenshotRecord filter_invalid_bbox(const ScreenshotRecord& record,
                                     DenoiseStats* stats) {
  ScreenshotRecord out = record;
  out.elements.clear();
  for (const auto& e : record.elements) {
    if (!e.bbox.valid() || e.bbox.degenerate()) {
      if (stats != nullptr) ++stats->n_invalid_bbox;
      continue;
    }
    out.elements.push_back(e);
  }
  if (stats != nullptr) stats->n_kept = out.elements.size();
  return out;
}

ScreenshotRecord filter_ocr_mismatch(const ScreenshotRecord& record,
                                     TextRecognizer& recognizer,
                                     double threshold, DenoiseStats* stats) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw validation_error("OCR threshold must be in [0,1]");
  }
  ScreenshotRecord out = record;
  out.elements.clear();
  for (const auto& e : record.elements) {
    const bool candidate = is_plain_text_category(e.category) &&
                           e.alt_text.has_value() && !e.alt_text->empty() &&
                           e.bbox.valid();
    if (!candidate) {
      out.elements.push_back(e);
      continue;
    }
    std::optional<std::string> recognized;
    try {
      recognized = recognizer.recognize(
          record.image_ref, to_pixel(e.bbox, record.width_px,
                                     record.height_px));
    } catch (...) {
      recognized = std::nullopt;
    }
    if (!recognized.has_value()) {
      if (stats != nullptr) ++stats->n_ocr_unavailable;
      out.elements.push_back(e);
      continue;
    }
    const double similarity =
        edit_similarity(clean_re(*e.alt_text), clean_re(*recognized));
    if (similarity < threshold) {
      if (stats != nullptr) ++stats->n_ocr_mismatch;
      continue;
    }
    out.elements.push_back(e);
  }
  if (stats != nullptr) stats->n_kept = out.elements.size();
  return out;
}

ScreenshotRecord denoise_record(const ScreenshotRecord& record,
                                TextRecognizer* recognizer, double threshold,
                                DenoiseStats* stats) {
  ScreenshotRecord out = filter_blank_invisible(record, stats);
  out = filter_invalid_bbox(out, stats);
  if (recognizer != nullptr) {
    out = filter_ocr_mismatch(out, *recognizer, threshold, stats);
  }
  if (stats != nullptr) stats->n_kept = out.elements.size();
  return out;
}

OracleRecognizer::OracleRecognizer(
    const std::vector<ScreenshotRecord>& records) {
  for (const auto& r : records) {
    for (const auto& e : r.elements) {
      if (!e.bbox.valid()) continue;
      index_[pixel_key(r.image_ref,
                       to_pixel(e.bbox, r.width_px, r.height_px))] =
          e.rendered_text;
    }
  }
}

std::optional<std::string> OracleRecognizer::recognize(
    const std::string& image_ref, const PixelBox& box_px) {
  auto it = index_.find(pixel_key(image_ref, box_px));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ExternalRecognizer::ExternalRecognizer(const std::string& command) {
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0) {
    throw io_error("failed to create recognizer pipes");
  }
  const pid_t pid = fork();
  if (pid < 0) throw io_error("failed to fork recognizer subprocess");
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  pid_ = pid;
  to_child_ = fdopen(to_child[1], "w");
  from_child_ = fdopen(from_child[0], "r");
  if (to_child_ == nullptr || from_child_ == nullptr) {
    throw io_error("failed to attach recognizer pipes");
  }
}

ExternalRecognizer::~ExternalRecognizer() {
  if (to_child_ != nullptr) fclose(to_child_);
  if (from_child_ != nullptr) fclose(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(static_cast<pid_t>(pid_), &status, 0);
  }
}

std::optional<std::string> ExternalRecognizer::recognize(
    const std::string& image_ref, const PixelBox& box_px) {
  if (to_child_ == nullptr || from_child_ == nullptr) return std::nullopt;
  json request = {{"image", image_ref},
                  {"bbox_px", {box_px[0], box_px[1], box_px[2], box_px[3]}}};
  const std::string line = request.dump() + "\n";
  if (std::fwrite(line.data(), 1, line.size(), to_child_) != line.size()) {
    return std::nullopt;
  }
  std::fflush(to_child_);

  std::string response;
  for (int c = std::fgetc(from_child_); c != EOF && c != '\n';
       c = std::fgetc(from_child_)) {
    response.push_back(static_cast<char>(c));
  }
  if (response.empty()) return std::nullopt;
  try {
    const json j = json::parse(response);
    auto it = j.find("text");
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

}  // namespace forge
