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
#include <httplib.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "forge/clients.hpp"
#include "forge/errors.hpp"
#include "forge/jsonx.hpp"

namespace forge {

namespace {

std::string read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read image file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string image_payload(const HttpClientConfig& config,
                          const std::string& image_ref) {
  if (!config.send_image_base64) return image_ref;
  return base64_encode(read_file_bytes(image_ref));
}

void apply_timeouts(httplib::Client& cli, double seconds) {
  const auto whole = static_cast<time_t>(seconds);
  const auto usec =
      static_cast<time_t>((seconds - static_cast<double>(whole)) * 1e6);
  cli.set_connection_timeout(whole, usec);
  cli.set_read_timeout(whole, usec);
  cli.set_write_timeout(whole, usec);
}

// One request with retry/backoff. Connection failures and 5xx responses are
// transient; other non-2xx statuses fail immediately.
std::string post_with_retries(const HttpClientConfig& config,
                              const std::string& body) {
  const ParsedUrl url = parse_http_url(config.url);
  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    if (attempt > 0) {
      const double delay =
          config.backoff_initial_ms *
          std::pow(config.backoff_multiplier, attempt - 1);
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long>(delay)));
    }
    httplib::Client cli(url.scheme_host_port);
    apply_timeouts(cli, config.timeout_seconds);
    httplib::Headers headers;
    if (!config.auth_token.empty()) {
      headers.emplace("Authorization", "Bearer " + config.auth_token);
    }
    auto res = cli.Post(url.path, headers, body, "application/json");
    if (!res) {
      last_failure = "connection error (" + httplib::to_string(res.error()) +
                     ")";
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      const json parsed = json::parse(res->body, nullptr, false);
      if (parsed.is_discarded() || !parsed.is_object() ||
          !parsed.contains("text") || !parsed["text"].is_string()) {
        throw transport_error("endpoint returned a malformed response body");
      }
      return parsed["text"].get<std::string>();
    }
    if (res->status >= 500) {
      last_failure = "status " + std::to_string(res->status);
      continue;
    }
    throw transport_error("endpoint returned non-retryable status " +
                          std::to_string(res->status));
  }
  throw transport_error("request to " + config.url + " failed after " +
                        std::to_string(config.retries + 1) + " attempts: " +
                        last_failure);
}

class HttpGrounder : public GrounderClient {
 public:
  explicit HttpGrounder(HttpClientConfig config)
      : config_(std::move(config)) {}

  std::string ground(const std::string& image_ref,
                     const std::string& re_text) override {
    json request = {{"image", image_payload(config_, image_ref)},
                    {"prompt", re_text}};
    return post_with_retries(config_, request.dump());
  }

 private:
  HttpClientConfig config_;
};

class HttpPlanner : public PlannerClient {
 public:
  explicit HttpPlanner(HttpClientConfig config) : config_(std::move(config)) {}

  std::string plan(const PlannerRequest& r) override {
    json candidates = json::array();
    for (const auto& b : r.candidates) {
      candidates.push_back(json::array({b.x1, b.y1, b.x2, b.y2}));
    }
    json request = {{"image", image_payload(config_, r.image_ref)},
                    {"prompt", r.task},
                    {"task", r.task},
                    {"history", r.history},
                    {"mode", planner_mode_name(r.mode)},
                    {"candidates", std::move(candidates)}};
    return post_with_retries(config_, request.dump());
  }

 private:
  HttpClientConfig config_;
};

}  // namespace

std::unique_ptr<GrounderClient> make_http_grounder(
    const HttpClientConfig& config) {
  return std::make_unique<HttpGrounder>(config);
}

std::unique_ptr<PlannerClient> make_http_planner(
    const HttpClientConfig& config) {
  return std::make_unique<HttpPlanner>(config);
}

}  // namespace forge
