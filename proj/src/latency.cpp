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
#include "forge/latency.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "forge/clients.hpp"
#include "forge/errors.hpp"
#include "forge/text.hpp"

namespace forge {

namespace {

// Splits complete SSE events off the front of `buffer`, returning the token
// payloads ("[DONE]" excluded).
std::vector<std::string> drain_sse_events(std::string& buffer) {
  std::vector<std::string> tokens;
  for (;;) {
    const std::size_t sep = buffer.find("\n\n");
    if (sep == std::string::npos) break;
    const std::string event = buffer.substr(0, sep);
    buffer.erase(0, sep + 2);
    const std::string prefix = "data:";
    if (event.compare(0, prefix.size(), prefix) != 0) continue;
    std::string payload = event.substr(prefix.size());
    if (!payload.empty() && payload.front() == ' ') payload.erase(0, 1);
    if (payload == "[DONE]") continue;
    tokens.push_back(std::move(payload));
  }
  return tokens;
}

}  // namespace

double mono_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void LatencyTrace::validate() const {
  if (!(t_submit <= t_first_token && t_first_token <= t_end)) {
    throw validation_error(
        "latency trace timestamps must satisfy submit <= first_token <= end");
  }
  if (n_output_tokens < 1) {
    throw validation_error("latency trace needs at least one output token");
  }
}

double compute_ttft(const LatencyTrace& trace) {
  trace.validate();
  return trace.t_first_token - trace.t_submit;
}

std::optional<double> compute_tpot(const LatencyTrace& trace) {
  trace.validate();
  if (trace.n_output_tokens < 2) return std::nullopt;
  const double e2e = trace.t_end - trace.t_submit;
  return (e2e - compute_ttft(trace)) /
         static_cast<double>(trace.n_output_tokens - 1);
}

StatSummary summarize(std::vector<double> values) {
  StatSummary s;
  s.n = values.size();
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  s.median = s.n % 2 == 1
                 ? values[s.n / 2]
                 : (values[s.n / 2 - 1] + values[s.n / 2]) / 2.0;
  // Nearest-rank 95th percentile.
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(s.n)));
  s.p95 = values[std::min(rank == 0 ? 0 : rank - 1, s.n - 1)];
  if (s.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stdev = std::sqrt(sq / static_cast<double>(s.n - 1));
  }
  return s;
}

json latency_report_to_json(const LatencyBenchReport& r) {
  auto stat = [](const StatSummary& s) {
    return json{{"n", s.n},
                {"mean_s", s.mean},
                {"median_s", s.median},
                {"p95_s", s.p95},
                {"stdev_s", s.stdev}};
  };
  return json{{"ttft", stat(r.ttft)},
              {"tpot", stat(r.tpot)},
              {"n_trials_requested", r.n_trials_requested},
              {"n_trials_completed", r.n_trials_completed},
              {"n_warmup", r.n_warmup},
              {"n_failures", r.n_failures}};
}

LatencyBenchReport run_bench_with(const TrialRunner& trial,
                                  const LatencyBenchOptions& options) {
  if (options.n_trials < 1) {
    throw validation_error("latency bench needs at least one trial");
  }
  for (std::size_t i = 0; i < options.warmup; ++i) {
    (void)trial();
  }

  LatencyBenchReport report;
  report.n_trials_requested = options.n_trials;
  report.n_warmup = options.warmup;
  std::vector<double> ttfts, tpots;
  ttfts.reserve(options.n_trials);
  tpots.reserve(options.n_trials);
  for (std::size_t i = 0; i < options.n_trials; ++i) {
    const auto trace = trial();
    if (!trace.has_value()) {
      ++report.n_failures;
      continue;
    }
    ttfts.push_back(compute_ttft(*trace));
    if (const auto tpot = compute_tpot(*trace)) tpots.push_back(*tpot);
    ++report.n_trials_completed;
  }
  if (ttfts.empty()) {
    throw transport_error("every latency trial failed; endpoint unreachable?");
  }
  report.ttft = summarize(std::move(ttfts));
  report.tpot = summarize(std::move(tpots));
  return report;
}

LatencyBenchReport run_bench(const std::string& endpoint_url,
                             const std::string& image_payload,
                             const std::string& prompt,
                             const LatencyBenchOptions& options) {
  const ParsedUrl url = parse_http_url(endpoint_url);
  const std::string body =
      json{{"image", image_payload}, {"prompt", prompt}}.dump();

  auto trial = [&]() -> std::optional<LatencyTrace> {
    httplib::Client cli(url.scheme_host_port);
    cli.set_read_timeout(300, 0);
    LatencyTrace trace;
    std::string buffer;
    int tokens = 0;
    httplib::Request req;
    req.method = "POST";
    req.path = url.path;
    req.set_header("Content-Type", "application/json");
    req.body = body;
    req.content_receiver = [&](const char* data, std::size_t length,
                               std::uint64_t, std::uint64_t) {
      buffer.append(data, length);
      for (auto& token : drain_sse_events(buffer)) {
        (void)token;
        if (tokens == 0) trace.t_first_token = mono_seconds();
        ++tokens;
      }
      return true;
    };
    trace.t_submit = mono_seconds();
    auto res = cli.send(req);
    trace.t_end = mono_seconds();
    if (!res || res->status != 200 || tokens == 0) return std::nullopt;
    trace.n_output_tokens = tokens;
    return trace;
  };
  return run_bench_with(trial, options);
}

std::string median_prompt(const std::vector<std::string>& prompts) {
  if (prompts.empty()) {
    throw validation_error("median prompt needs a non-empty prompt pool");
  }
  std::vector<std::pair<std::size_t, const std::string*>> by_length;
  by_length.reserve(prompts.size());
  for (const auto& p : prompts) {
    by_length.emplace_back(utf8_decode(p).size(), &p);
  }
  std::sort(by_length.begin(), by_length.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first < b.first;
              return *a.second < *b.second;
            });
  return *by_length[(by_length.size() - 1) / 2].second;  // lower median
}

}  // namespace forge
