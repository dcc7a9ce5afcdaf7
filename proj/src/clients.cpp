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

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "forge/errors.hpp"
#include "forge/jsonx.hpp"

namespace forge {

namespace {

// Pulls every real number out of `s` in order.
std::vector<double> collect_numbers(const std::string& s) {
  std::vector<double> out;
  const char* p = s.c_str();
  const char* end = p + s.size();
  while (p < end) {
    if (std::isdigit(static_cast<unsigned char>(*p)) ||
        ((*p == '-' || *p == '+' || *p == '.') && p + 1 < end &&
         std::isdigit(static_cast<unsigned char>(p[1])))) {
      char* after = nullptr;
      const double v = std::strtod(p, &after);
      if (after != p) {
        out.push_back(v);
        p = after;
        continue;
      }
    }
    ++p;
  }
  return out;
}

bool parse_single_number(const std::string& piece, double* out) {
  const char* p = piece.c_str();
  while (*p != '\0' && std::isspace(static_cast<unsigned char>(*p))) ++p;
  char* after = nullptr;
  const double v = std::strtod(p, &after);
  if (after == p) return false;
  while (*after != '\0' && std::isspace(static_cast<unsigned char>(*after))) {
    ++after;
  }
  if (*after != '\0') return false;
  *out = v;
  return true;
}

// Numbers inside the first conforming (...) or [...] group.
std::optional<std::vector<double>> bracketed_tuple(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char open = s[i];
    if (open != '(' && open != '[') continue;
    const char close = open == '(' ? ')' : ']';
    const std::size_t j = s.find(close, i + 1);
    if (j == std::string::npos) continue;
    const std::string inner = s.substr(i + 1, j - i - 1);
    std::vector<double> values;
    std::size_t start = 0;
    bool ok = true;
    while (start <= inner.size()) {
      const std::size_t comma = inner.find(',', start);
      const std::string piece =
          inner.substr(start, comma == std::string::npos ? std::string::npos
                                                         : comma - start);
      double v = 0.0;
      if (!parse_single_number(piece, &v)) {
        ok = false;
        break;
      }
      values.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (ok && (values.size() == 2 || values.size() == 4)) return values;
  }
  return std::nullopt;
}

// Rescales values > 1 per the configured convention; false when the result
// still leaves [0,1].
bool normalize_values(std::vector<double>& values, OverOneScale scale) {
  bool over_one = false;
  for (double v : values) over_one = over_one || v > 1.0;
  if (over_one) {
    const double divisor = scale == OverOneScale::kThousandths ? 1000.0 : 100.0;
    for (double& v : values) v /= divisor;
  }
  for (double v : values) {
    if (v < 0.0 || v > 1.0) return false;
  }
  return true;
}

// First parseable JSON object embedded in free-form text.
std::optional<json> extract_json_block(const std::string& raw) {
  for (std::size_t start = raw.find('{'); start != std::string::npos;
       start = raw.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < raw.size(); ++i) {
      const char c = raw[i];
      if (in_string) {
        if (c == '\\') {
          ++i;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        --depth;
        if (depth == 0) {
          const std::string candidate = raw.substr(start, i - start + 1);
          json parsed = json::parse(candidate, nullptr, false);
          if (!parsed.is_discarded() && parsed.is_object()) return parsed;
          break;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

NormPoint ParsedCoords::as_point() const {
  if (point.has_value()) return *point;
  return center(*box);
}

std::optional<ParsedCoords> parse_coords(const std::string& raw,
                                         OverOneScale scale) {
  std::vector<double> values;
  if (auto tuple = bracketed_tuple(raw)) {
    values = std::move(*tuple);
  } else {
    values = collect_numbers(raw);
    if (values.size() != 2 && values.size() != 4) return std::nullopt;
  }
  if (!normalize_values(values, scale)) return std::nullopt;

  ParsedCoords coords;
  if (values.size() == 2) {
    coords.point = NormPoint{values[0], values[1]};
    if (!coords.point->valid()) return std::nullopt;
  } else {
    coords.box = NormBBox{values[0], values[1], values[2], values[3]};
    if (!coords.box->valid()) return std::nullopt;
  }
  return coords;
}

std::string format_point(const NormPoint& p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%.6f, %.6f)", p.x, p.y);
  return buf;
}

std::string format_bbox(const NormBBox& b) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "[%.6f, %.6f, %.6f, %.6f]", b.x1, b.y1,
                b.x2, b.y2);
  return buf;
}

PlannerParse parse_planner_output(const std::string& raw, PlannerMode mode) {
  const auto block = extract_json_block(raw);
  if (!block.has_value()) {
    return {std::nullopt, "no JSON action block in planner output"};
  }
  const json& j = *block;

  auto action_it = j.find("action");
  if (action_it == j.end() || !action_it->is_string()) {
    return {std::nullopt, "JSON block has no 'action' string"};
  }
  PlannerOutput out;
  try {
    out.kind = action_kind_from_name(action_it->get<std::string>());
  } catch (const validation_error& e) {
    return {std::nullopt, e.what()};
  }

  auto get_string = [&](const char* key) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
  };
  out.intent_text = get_string("intent");
  out.functionality_text = get_string("functionality");
  out.text_param = get_string("text");
  if (auto dir = get_string("direction")) {
    try {
      out.direction = swipe_direction_from_name(*dir);
    } catch (const validation_error& e) {
      return {std::nullopt, e.what()};
    }
  }
  if (auto it = j.find("tag"); it != j.end() && it->is_number_integer()) {
    out.som_tag = it->get<int>();
  }
  if (auto it = j.find("point");
      it != j.end() && it->is_array() && it->size() == 2 &&
      (*it)[0].is_number() && (*it)[1].is_number()) {
    std::vector<double> values = {(*it)[0].get<double>(),
                                  (*it)[1].get<double>()};
    if (normalize_values(values, OverOneScale::kThousandths)) {
      out.point = NormPoint{values[0], values[1]};
    }
  }

  if (action_needs_grounding(out.kind)) {
    switch (mode) {
      case PlannerMode::kTwoStageIntent:
        if (!out.intent_text.has_value() || out.intent_text->empty()) {
          return {std::nullopt, "grounded action lacks an intent description"};
        }
        break;
      case PlannerMode::kTwoStageFunctionality:
        if (!out.functionality_text.has_value() ||
            out.functionality_text->empty()) {
          return {std::nullopt,
                  "grounded action lacks a functionality description"};
        }
        break;
      case PlannerMode::kSom:
        if (!out.som_tag.has_value()) {
          return {std::nullopt, "grounded action lacks a candidate tag"};
        }
        break;
      case PlannerMode::kPlannerOnly:
        if (!out.point.has_value()) {
          return {std::nullopt, "grounded action lacks target coordinates"};
        }
        break;
    }
  }
  return {out, ""};
}

ParsedUrl parse_http_url(const std::string& url) {
  const std::string prefix = "http://";
  if (url.substr(0, prefix.size()) != prefix) {
    throw config_error("unsupported endpoint URL (expected http://...): " +
                       url);
  }
  const std::size_t path_start = url.find('/', prefix.size());
  if (path_start == std::string::npos) {
    return {url, "/"};
  }
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string base64_encode(const std::string& bytes) {
  static const char* kTable =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out.push_back(kTable[(v >> 18) & 0x3f]);
    out.push_back(kTable[(v >> 12) & 0x3f]);
    out.push_back(kTable[(v >> 6) & 0x3f]);
    out.push_back(kTable[v & 0x3f]);
    i += 3;
  }
  if (i + 1 == bytes.size()) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out.push_back(kTable[(v >> 18) & 0x3f]);
    out.push_back(kTable[(v >> 12) & 0x3f]);
    out += "==";
  } else if (i + 2 == bytes.size()) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out.push_back(kTable[(v >> 18) & 0x3f]);
    out.push_back(kTable[(v >> 12) & 0x3f]);
    out.push_back(kTable[(v >> 6) & 0x3f]);
    out += "=";
  }
  return out;
}

void OracleGrounder::add_answer(const std::string& image_ref,
                                const std::string& re_text,
                                const NormBBox& gt) {
  by_query_[{image_ref, re_text}] = gt;
}

void OracleGrounder::add_image_answer(const std::string& image_ref,
                                      const NormBBox& gt) {
  by_image_[image_ref] = gt;
}

void OracleGrounder::force_miss(const std::string& image_ref) {
  missing_[image_ref] = true;
}

std::string OracleGrounder::ground(const std::string& image_ref,
                                   const std::string& re_text) {
  calls_.fetch_add(1);
  if (missing_.count(image_ref)) return format_point(miss_point_);
  if (auto it = by_query_.find({image_ref, re_text}); it != by_query_.end()) {
    return format_point(center(it->second));
  }
  if (auto it = by_image_.find(image_ref); it != by_image_.end()) {
    return format_point(center(it->second));
  }
  return format_point(miss_point_);
}

void ScriptedPlanner::add_response(const std::string& image_ref,
                                   const std::string& raw) {
  responses_[image_ref] = raw;
}

std::string ScriptedPlanner::plan(const PlannerRequest& request) {
  calls_.fetch_add(1);
  last_request_ = request;
  if (auto it = responses_.find(request.image_ref); it != responses_.end()) {
    return it->second;
  }
  if (default_raw_.has_value()) return *default_raw_;
  throw transport_error("no scripted planner response for image '" +
                        request.image_ref + "'");
}

void ScriptedGrounder::add_response(const std::string& image_ref,
                                    const std::string& re_text,
                                    const std::string& raw) {
  responses_[{image_ref, re_text}] = raw;
}

std::string ScriptedGrounder::ground(const std::string& image_ref,
                                     const std::string& re_text) {
  calls_.fetch_add(1);
  if (auto it = responses_.find({image_ref, re_text});
      it != responses_.end()) {
    return it->second;
  }
  if (default_raw_.has_value()) return *default_raw_;
  throw transport_error("no scripted grounder response for ('" + image_ref +
                        "', '" + re_text + "')");
}

}  // namespace forge
