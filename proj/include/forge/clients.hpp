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
#ifndef FORGE_CLIENTS_HPP_
#define FORGE_CLIENTS_HPP_

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forge/actions.hpp"
#include "forge/geometry.hpp"

// Client abstractions over external grounder and planner model endpoints,
// the text-to-coordinates parsing they share, and deterministic mock/oracle
// implementations used to close evaluation loops in tests.
//
// Wire format (JSON over HTTP):
//   grounder request  {"image": "<base64|uri>", "prompt": "<re>"}
//   planner request   adds {"task", "history": [...], "mode", "candidates"}
//   response          {"text": "<raw model output>"}

namespace forge {

// Scale assumed for coordinate values greater than 1 (values all <= 1 are
// already normalized). Different grounding models emit different scales, so
// this is per-endpoint configuration.
enum class OverOneScale { kThousandths, kPercent };

struct ParsedCoords {
  std::optional<NormPoint> point;
  std::optional<NormBBox> box;

  // The point to score: the parsed point, or the parsed box's center.
  NormPoint as_point() const;
};

// Extracts a 2-tuple (point) or 4-tuple (box) of coordinates from raw model
// text: "(x,y)", "x,y", "[x1,y1,x2,y2]", with or without brackets and
// whitespace, optionally embedded in prose. Values above 1 are rescaled per
// `scale`. Returns nullopt when no such tuple exists or the values leave
// [0,1] after rescaling; callers score that as incorrect.
std::optional<ParsedCoords> parse_coords(
    const std::string& raw, OverOneScale scale = OverOneScale::kThousandths);

// Canonical coordinate formatting; parse_coords round-trips these within
// 1e-6.
std::string format_point(const NormPoint& p);
std::string format_bbox(const NormBBox& b);

struct PlannerParse {
  std::optional<PlannerOutput> output;
  std::string error;  // set when output is absent (malformed)
};

// Extracts the structured action from the first well-formed JSON object
// embedded in the response (prompts instruct models to answer with a JSON
// block; surrounding free-form text is tolerated and ignored). Keys:
// "action" (required), "intent", "functionality", "text", "direction",
// "tag", "point". A grounded kind without its mode's grounding field is
// malformed.
PlannerParse parse_planner_output(const std::string& raw, PlannerMode mode);

// External grounding model: maps (screenshot, referring expression) to raw
// output text. Implementations either produce a response or raise
// transport_error within their configured timeout; they must be safe for
// concurrent calls.
class GrounderClient {
 public:
  virtual ~GrounderClient() = default;
  virtual std::string ground(const std::string& image_ref,
                             const std::string& re_text) = 0;
};

struct PlannerRequest {
  std::string task;
  std::string image_ref;
  std::vector<std::string> history;  // textual only; no past screenshots
  PlannerMode mode = PlannerMode::kTwoStageIntent;
  std::vector<NormBBox> candidates;  // SoM candidate boxes, tags 1..K
};

class PlannerClient {
 public:
  virtual ~PlannerClient() = default;
  virtual std::string plan(const PlannerRequest& request) = 0;
};

struct HttpClientConfig {
  std::string url;  // e.g. http://host:port/path
  double timeout_seconds = 30.0;
  int retries = 2;
  int backoff_initial_ms = 100;
  double backoff_multiplier = 2.0;
  std::string auth_token;        // sent as a bearer token when non-empty
  bool send_image_base64 = true;  // false passes the image_ref through
  OverOneScale over_one_scale = OverOneScale::kThousandths;
};

// JSON-over-HTTP clients with exponential backoff on transient failures
// (connection errors and 5xx). Non-retryable statuses and retry exhaustion
// raise transport_error.
std::unique_ptr<GrounderClient> make_http_grounder(
    const HttpClientConfig& config);
std::unique_ptr<PlannerClient> make_http_planner(
    const HttpClientConfig& config);

struct ParsedUrl {
  std::string scheme_host_port;  // httplib client target
  std::string path;              // defaults to "/"
};
ParsedUrl parse_http_url(const std::string& url);

std::string base64_encode(const std::string& bytes);

// Answer-key grounder: replies with the ground-truth box center, textually.
// Lookup order: exact (image_ref, re) key, then image_ref alone, then the
// configured miss point. Closes evaluation loops in tests.
class OracleGrounder : public GrounderClient {
 public:
  OracleGrounder() = default;

  void add_answer(const std::string& image_ref, const std::string& re_text,
                  const NormBBox& gt);
  void add_image_answer(const std::string& image_ref, const NormBBox& gt);
  void set_miss_point(const NormPoint& p) { miss_point_ = p; }
  // Queries for these images answer with the miss point even when known.
  void force_miss(const std::string& image_ref);

  std::string ground(const std::string& image_ref,
                     const std::string& re_text) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  std::map<std::pair<std::string, std::string>, NormBBox> by_query_;
  std::map<std::string, NormBBox> by_image_;
  std::map<std::string, bool> missing_;
  NormPoint miss_point_{0.0, 0.0};
  std::atomic<std::size_t> calls_{0};
};

// Replays canned raw responses keyed by image_ref.
class ScriptedPlanner : public PlannerClient {
 public:
  void add_response(const std::string& image_ref, const std::string& raw);
  void set_default_response(const std::string& raw) { default_raw_ = raw; }

  std::string plan(const PlannerRequest& request) override;

  std::size_t calls() const { return calls_.load(); }
  // The last request seen; single-threaded test instrumentation.
  const PlannerRequest& last_request() const { return last_request_; }

 private:
  std::map<std::string, std::string> responses_;
  std::optional<std::string> default_raw_;
  PlannerRequest last_request_;
  std::atomic<std::size_t> calls_{0};
};

// Replays canned raw responses keyed by (image_ref, re_text).
class ScriptedGrounder : public GrounderClient {
 public:
  void add_response(const std::string& image_ref, const std::string& re_text,
                    const std::string& raw);
  void set_default_response(const std::string& raw) { default_raw_ = raw; }

  std::string ground(const std::string& image_ref,
                     const std::string& re_text) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  std::map<std::pair<std::string, std::string>, std::string> responses_;
  std::optional<std::string> default_raw_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace forge

#endif  // FORGE_CLIENTS_HPP_
