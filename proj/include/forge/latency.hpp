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
#ifndef FORGE_LATENCY_HPP_
#define FORGE_LATENCY_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "forge/jsonx.hpp"

// Single-query latency protocol: the same (image, prompt) pair is submitted
// repeatedly at batch size 1 against a token-streaming endpoint, measuring
// time-to-first-token and time-per-output-token. All timestamps come from a
// monotonic clock, never wall time.
//
// Streaming endpoint contract: POST {"image", "prompt"} is answered with
// server-sent events, one `data: <token>` event per output token; a final
// `data: [DONE]` event is permitted and not counted. The client records the
// first-event and stream-close times.

namespace forge {

// The paper's protocol runs 2000 trials.
inline constexpr std::size_t kDefaultLatencyTrials = 2000;
inline constexpr std::size_t kDefaultLatencyWarmup = 10;

struct LatencyTrace {
  double t_submit = 0.0;       // monotonic seconds
  double t_first_token = 0.0;
  double t_end = 0.0;
  int n_output_tokens = 1;

  // Enforces t_submit <= t_first_token <= t_end and n_output_tokens >= 1.
  void validate() const;
};

// t_first_token - t_submit.
double compute_ttft(const LatencyTrace& trace);

// (e2e latency - TTFT) / (tokens - 1): decode-only time per token. Absent
// (not zero, not infinity) for single-token responses.
std::optional<double> compute_tpot(const LatencyTrace& trace);

struct StatSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double p95 = 0.0;
  double stdev = 0.0;  // sample standard deviation; 0 when n < 2
};

StatSummary summarize(std::vector<double> values);

struct LatencyBenchOptions {
  std::size_t n_trials = kDefaultLatencyTrials;
  std::size_t warmup = kDefaultLatencyWarmup;  // discarded, reported apart
};

struct LatencyBenchReport {
  StatSummary ttft;
  StatSummary tpot;
  std::size_t n_trials_requested = 0;
  std::size_t n_trials_completed = 0;
  std::size_t n_warmup = 0;
  std::size_t n_failures = 0;  // failed trials, excluded from the stats
};

json latency_report_to_json(const LatencyBenchReport& r);

// One request; nullopt on failure.
using TrialRunner = std::function<std::optional<LatencyTrace>()>;

// Strictly sequential trial loop (trial i+1 is not submitted before trial i
// completes): warmup first, then the measured trials. Raises transport_error
// when not a single measured trial succeeds.
LatencyBenchReport run_bench_with(const TrialRunner& trial,
                                  const LatencyBenchOptions& options);

// The HTTP flavor against a streaming endpoint. `image_payload` is sent in
// the request's "image" field as-is (callers base64-encode file contents or
// pass a URI through).
LatencyBenchReport run_bench(const std::string& endpoint_url,
                             const std::string& image_payload,
                             const std::string& prompt,
                             const LatencyBenchOptions& options);

// The benchmark prompt of median length (code points) over a prompt pool,
// lower median on ties. Used to pick a representative query.
std::string median_prompt(const std::vector<std::string>& prompts);

double mono_seconds();

}  // namespace forge

#endif  // FORGE_LATENCY_HPP_
