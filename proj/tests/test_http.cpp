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

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <thread>
#include <vector>

#include "forge/clients.hpp"
#include "forge/errors.hpp"
#include "forge/jsonx.hpp"
#include "forge/latency.hpp"

using namespace forge;

namespace {

// An httplib server on a random localhost port, torn down with the test.
class MockServer {
 public:
  MockServer() = default;
  ~MockServer() { stop(); }

  void start() {
    port_ = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }

  void stop() {
    if (thread_.joinable()) {
      server.stop();
      thread_.join();
    }
  }

  std::string url(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

  httplib::Server server;

 private:
  int port_ = 0;
  std::thread thread_;
};

HttpClientConfig config_for(const std::string& url, int retries = 2,
                            int backoff_ms = 5) {
  HttpClientConfig config;
  config.url = url;
  config.retries = retries;
  config.backoff_initial_ms = backoff_ms;
  config.backoff_multiplier = 2.0;
  config.timeout_seconds = 5.0;
  config.send_image_base64 = false;  // pass image refs through in tests
  return config;
}

}  // namespace

TEST_CASE("http grounder round-trips the wire format") {
  MockServer mock;
  json seen_request;
  mock.server.Post("/ground", [&](const httplib::Request& req,
                                  httplib::Response& res) {
    seen_request = json::parse(req.body);
    res.set_content(json{{"text", "(0.25, 0.75)"}}.dump(), "application/json");
  });
  mock.start();

  auto client = make_http_grounder(config_for(mock.url("/ground")));
  CHECK(client->ground("shot.png", "the red button") == "(0.25, 0.75)");
  CHECK(seen_request["image"] == "shot.png");
  CHECK(seen_request["prompt"] == "the red button");
}

TEST_CASE("http planner sends task, history, mode, and candidates") {
  MockServer mock;
  json seen_request;
  mock.server.Post("/plan", [&](const httplib::Request& req,
                                httplib::Response& res) {
    seen_request = json::parse(req.body);
    res.set_content(json{{"text", R"({"action":"click","tag":2})"}}.dump(),
                    "application/json");
  });
  mock.start();

  auto client = make_http_planner(config_for(mock.url("/plan")));
  PlannerRequest request;
  request.task = "open settings";
  request.image_ref = "shot.png";
  request.history = {"click home", "swipe up"};
  request.mode = PlannerMode::kSom;
  request.candidates = {{0.1, 0.1, 0.2, 0.2}, {0.5, 0.5, 0.6, 0.6}};
  CHECK(client->plan(request) == R"({"action":"click","tag":2})");
  CHECK(seen_request["task"] == "open settings");
  CHECK(seen_request["history"].size() == 2);
  CHECK(seen_request["mode"] == "som");
  CHECK(seen_request["candidates"].size() == 2);
}

TEST_CASE("transient failures are retried with backoff until success") {
  MockServer mock;
  std::atomic<int> hits{0};
  std::vector<double> hit_times;
  mock.server.Post("/flaky", [&](const httplib::Request&,
                                 httplib::Response& res) {
    hit_times.push_back(mono_seconds());
    const int n = ++hits;
    if (n <= 2) {
      res.status = 500;
      return;
    }
    res.set_content(json{{"text", "ok"}}.dump(), "application/json");
  });
  mock.start();

  auto client = make_http_grounder(config_for(mock.url("/flaky"),
                                              /*retries=*/2,
                                              /*backoff_ms=*/40));
  CHECK(client->ground("img", "re") == "ok");
  CHECK(hits.load() == 3);
  // Exponential backoff: >= 40 ms before attempt 2, >= 80 ms before attempt 3.
  REQUIRE(hit_times.size() == 3);
  CHECK(hit_times[1] - hit_times[0] >= 0.035);
  CHECK(hit_times[2] - hit_times[1] >= 0.075);
}

TEST_CASE("retry exhaustion raises a transport error after retries+1 calls") {
  MockServer mock;
  std::atomic<int> hits{0};
  mock.server.Post("/down", [&](const httplib::Request&,
                                httplib::Response& res) {
    ++hits;
    res.status = 503;
  });
  mock.start();

  auto client = make_http_grounder(config_for(mock.url("/down"),
                                              /*retries=*/1));
  CHECK_THROWS_AS(client->ground("img", "re"), transport_error);
  CHECK(hits.load() == 2);
}

TEST_CASE("non-retryable statuses fail on the first attempt") {
  MockServer mock;
  std::atomic<int> hits{0};
  mock.server.Post("/nope", [&](const httplib::Request&,
                                httplib::Response& res) {
    ++hits;
    res.status = 404;
  });
  mock.start();

  auto client = make_http_grounder(config_for(mock.url("/nope")));
  CHECK_THROWS_AS(client->ground("img", "re"), transport_error);
  CHECK(hits.load() == 1);
}

TEST_CASE("an unreachable host is a transport error") {
  // Port 9 (discard) is almost certainly closed on loopback.
  auto client = make_http_grounder(config_for("http://127.0.0.1:9/x",
                                              /*retries=*/0));
  CHECK_THROWS_AS(client->ground("img", "re"), transport_error);
}

TEST_CASE("bearer tokens ride along as Authorization headers") {
  MockServer mock;
  std::string seen_auth;
  mock.server.Post("/auth", [&](const httplib::Request& req,
                                httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    res.set_content(json{{"text", "ok"}}.dump(), "application/json");
  });
  mock.start();

  auto config = config_for(mock.url("/auth"));
  config.auth_token = "secret-token";
  auto client = make_http_grounder(config);
  client->ground("img", "re");
  CHECK(seen_auth == "Bearer secret-token");
}

TEST_CASE("a malformed response body is a transport error") {
  MockServer mock;
  mock.server.Post("/garbled", [&](const httplib::Request&,
                                   httplib::Response& res) {
    res.set_content("not json", "text/plain");
  });
  mock.start();

  auto client = make_http_grounder(config_for(mock.url("/garbled")));
  CHECK_THROWS_AS(client->ground("img", "re"), transport_error);
}

TEST_CASE("identical concurrent calls produce identical outputs") {
  MockServer mock;
  mock.server.Post("/stable", [&](const httplib::Request& req,
                                  httplib::Response& res) {
    const json body = json::parse(req.body);
    res.set_content(
        json{{"text", "answer for " + body["prompt"].get<std::string>()}}
            .dump(),
        "application/json");
  });
  mock.start();

  auto client = make_http_grounder(config_for(mock.url("/stable")));
  std::vector<std::string> answers(8);
  std::vector<std::thread> threads;
  for (auto& slot : answers) {
    threads.emplace_back(
        [&client, &slot] { slot = client->ground("img", "same re"); });
  }
  for (auto& t : threads) t.join();
  for (const auto& a : answers) CHECK(a == "answer for same re");
}
