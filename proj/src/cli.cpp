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
#include "forge/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "forge/agent.hpp"
#include "forge/dedup.hpp"
#include "forge/denoise.hpp"
#include "forge/errors.hpp"
#include "forge/grounding_eval.hpp"
#include "forge/ingest.hpp"
#include "forge/jsonl.hpp"
#include "forge/latency.hpp"
#include "forge/parallel.hpp"
#include "forge/refine.hpp"

namespace forge::cli {

namespace {

struct RunOutput {
  json report = json::object();
  std::string summary;
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out += "'";
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw io_error("failed writing '" + path + "'");
}

json load_json_file(const std::string& path) {
  const json parsed = json::parse(read_text_file(path), nullptr, false);
  if (parsed.is_discarded()) {
    throw validation_error(path + ": invalid JSON document");
  }
  return parsed;
}

std::vector<TaskType> task_types_from_names(
    const std::vector<std::string>& names) {
  std::vector<TaskType> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(task_type_from_name(n));
  return out;
}

OverOneScale scale_from_int(int scale) {
  if (scale == 1000) return OverOneScale::kThousandths;
  if (scale == 100) return OverOneScale::kPercent;
  throw config_error("--scale must be 1000 or 100");
}

std::vector<GroundingSample> sorted_by_id(std::vector<GroundingSample> s) {
  std::sort(s.begin(), s.end(),
            [](const GroundingSample& a, const GroundingSample& b) {
              return a.sample_id < b.sample_id;
            });
  return s;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestOpts {
  std::vector<std::string> inputs;
  std::string source;
  std::string out;
  bool no_reg = false;
  bool no_widget_listing = false;
  int era_cutoff = 0;  // 0 means unset
};

RunOutput run_ingest(const IngestOpts& o) {
  GenerateOptions gen;
  if (o.era_cutoff > 0) gen.era_cutoff_year = o.era_cutoff;

  std::size_t n_records = 0, n_malformed = 0;
  GenerateStats stats;
  std::vector<GroundingSample> samples;
  for (const auto& path : o.inputs) {
    ParsedRecords parsed = parse_records_file(path, o.source);
    n_records += parsed.records.size();
    n_malformed += parsed.n_malformed;
    for (const auto& record : parsed.records) {
      auto grounding = generate_samples(record, gen, &stats);
      samples.insert(samples.end(), grounding.begin(), grounding.end());
      if (!o.no_reg) {
        auto reg = generate_reg_samples(record, gen, &stats);
        samples.insert(samples.end(), reg.begin(), reg.end());
      }
      if (!o.no_widget_listing) {
        if (auto listing = generate_widget_listing(record, gen, &stats)) {
          samples.push_back(std::move(*listing));
        }
      }
    }
  }
  samples = sorted_by_id(std::move(samples));
  save_samples(o.out, samples);

  RunOutput run;
  run.report["n_input_files"] = o.inputs.size();
  run.report["n_records"] = n_records;
  run.report["n_malformed_lines"] = n_malformed;
  run.report["n_samples"] = samples.size();
  run.report["n_grounding"] = stats.n_grounding;
  run.report["n_reg"] = stats.n_reg;
  run.report["n_widget_listing"] = stats.n_widget_listing;
  run.report["n_excluded_invalid_bbox"] = stats.n_excluded_invalid_bbox;
  run.report["out"] = o.out;
  run.summary = "ingested " + std::to_string(n_records) + " records into " +
                std::to_string(samples.size()) + " samples (" +
                std::to_string(n_malformed) + " malformed lines skipped)";
  return run;
}

// ---------------------------------------------------------------------------
// denoise

struct DenoiseOpts {
  std::string input;
  std::string out;
  std::string ocr = "none";  // none | oracle | external:<cmd>
  double threshold = 0.8;
};

RunOutput run_denoise(const DenoiseOpts& o) {
  ParsedRecords parsed = parse_records_file(o.input, "");

  std::unique_ptr<TextRecognizer> recognizer;
  if (o.ocr == "oracle") {
    recognizer = std::make_unique<OracleRecognizer>(parsed.records);
  } else if (o.ocr.rfind("external:", 0) == 0) {
    recognizer = std::make_unique<ExternalRecognizer>(o.ocr.substr(9));
  } else if (o.ocr != "none") {
    throw config_error("--ocr must be none, oracle, or external:<cmd>");
  }

  DenoiseStats stats;
  std::size_t n_elements_in = 0, n_elements_out = 0;
  std::vector<ScreenshotRecord> cleaned;
  cleaned.reserve(parsed.records.size());
  for (const auto& record : parsed.records) {
    n_elements_in += record.elements.size();
    ScreenshotRecord out = denoise_record(
        record, recognizer.get(), o.threshold, &stats);
    n_elements_out += out.elements.size();
    cleaned.push_back(std::move(out));
  }
  save_records(o.out, cleaned);

  const std::size_t dropped = stats.n_blank_invisible + stats.n_invalid_bbox +
                              stats.n_ocr_mismatch;
  if (n_elements_out + dropped != n_elements_in) {
    throw validation_error("denoise stage counts do not reconcile");
  }

  RunOutput run;
  run.report["n_records"] = parsed.records.size();
  run.report["n_malformed_lines"] = parsed.n_malformed;
  run.report["n_elements_in"] = n_elements_in;
  run.report["n_elements_kept"] = n_elements_out;
  run.report["n_blank_invisible"] = stats.n_blank_invisible;
  run.report["n_invalid_bbox"] = stats.n_invalid_bbox;
  run.report["n_ocr_mismatch"] = stats.n_ocr_mismatch;
  run.report["n_ocr_unavailable"] = stats.n_ocr_unavailable;
  run.report["reconciled"] = true;
  run.report["out"] = o.out;
  run.summary = "denoised " + std::to_string(parsed.records.size()) +
                " records: kept " + std::to_string(n_elements_out) + "/" +
                std::to_string(n_elements_in) + " elements";
  return run;
}

// ---------------------------------------------------------------------------
// dedup

struct DedupOpts {
  std::string input;
  std::string out;
  std::uint64_t seed = 0;
};

RunOutput run_dedup(const DedupOpts& o) {
  const auto samples = load_samples(o.input);
  DedupStats stats;
  const auto kept = dedup_samples(samples, o.seed, &stats);
  save_samples(o.out, kept);
  if (stats.n_kept + stats.n_dropped != stats.n_input) {
    throw validation_error("dedup stage counts do not reconcile");
  }

  RunOutput run;
  run.report["n_input"] = stats.n_input;
  run.report["n_groups"] = stats.n_groups;
  run.report["n_kept"] = stats.n_kept;
  run.report["n_dropped"] = stats.n_dropped;
  run.report["reconciled"] = true;
  run.report["out"] = o.out;
  run.summary = "dedup kept " + std::to_string(stats.n_kept) + "/" +
                std::to_string(stats.n_input) + " samples (" +
                std::to_string(stats.n_groups) + " groups)";
  return run;
}

// ---------------------------------------------------------------------------
// refine

struct CoarseOpts {
  std::string input;
  std::string out;
  bool drop_reg = false;
  std::vector<std::string> drop_task_types;
  bool drop_outdated = false;
  std::vector<std::string> outdated_sources;
};

RunOutput run_refine_coarse(const CoarseOpts& o) {
  CoarsePolicy policy;
  policy.drop_reg = o.drop_reg;
  for (TaskType t : task_types_from_names(o.drop_task_types)) {
    policy.drop_task_types.insert(t);
  }
  policy.drop_outdated = o.drop_outdated;
  policy.outdated_sources.insert(o.outdated_sources.begin(),
                                 o.outdated_sources.end());

  const auto samples = load_samples(o.input);
  CoarseStats stats;
  const auto kept = coarse_filter(samples, policy, &stats);
  save_samples(o.out, kept);
  if (stats.n_kept + stats.n_dropped_task_type + stats.n_dropped_outdated !=
      stats.n_input) {
    throw validation_error("coarse stage counts do not reconcile");
  }

  RunOutput run;
  run.report["n_input"] = stats.n_input;
  run.report["n_dropped_task_type"] = stats.n_dropped_task_type;
  run.report["n_dropped_outdated"] = stats.n_dropped_outdated;
  run.report["n_kept"] = stats.n_kept;
  run.report["reconciled"] = true;
  run.report["out"] = o.out;
  run.summary = "coarse refine kept " + std::to_string(stats.n_kept) + "/" +
                std::to_string(stats.n_input) + " samples";
  return run;
}

struct PlanOpts {
  std::vector<std::string> sources;
  std::vector<std::string> task_types;
  std::vector<double> ratios;
  std::string out;
};

RunOutput run_refine_plan(const PlanOpts& o) {
  std::vector<TaskType> types;
  if (o.task_types.empty()) {
    types.assign(std::begin(kAllTaskTypes), std::end(kAllTaskTypes));
  } else {
    types = task_types_from_names(o.task_types);
  }
  const auto plans = build_ratio_sweep(o.sources, types, o.ratios);
  json doc = json::array();
  for (const auto& p : plans) doc.push_back(plan_to_json(p));
  write_text_file(o.out, doc.dump(2) + "\n");

  RunOutput run;
  run.report["n_plans"] = plans.size();
  run.report["out"] = o.out;
  run.summary = "wrote " + std::to_string(plans.size()) + " sweep plans";
  return run;
}

// Subprocess evaluator contract: `<cmd> <subset-path>` writes a JSON metric
// map ({"benchmark": value, ...}) to stdout.
SweepEvaluator subprocess_evaluator(const std::string& command) {
  static std::atomic<unsigned> counter{0};
  return [command](const std::vector<GroundingSample>& subset)
             -> std::map<std::string, double> {
    const auto dir = std::filesystem::temp_directory_path();
    const std::string path =
        (dir / ("forge_subset_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter.fetch_add(1)) + ".jsonl"))
            .string();
    save_samples(path, subset);
    const std::string cmdline = command + " " + shell_quote(path);
    std::string output;
    FILE* pipe = ::popen(cmdline.c_str(), "r");
    if (pipe == nullptr) {
      std::filesystem::remove(path);
      throw io_error("failed to launch evaluator: " + cmdline);
    }
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof(buf), pipe)) > 0) {
      output.append(buf, n);
    }
    const int status = ::pclose(pipe);
    std::filesystem::remove(path);
    if (status != 0) {
      throw transport_error("evaluator exited with status " +
                            std::to_string(status));
    }
    const json parsed = json::parse(output, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      throw validation_error("evaluator did not print a JSON metric map");
    }
    std::map<std::string, double> metrics;
    for (auto it = parsed.begin(); it != parsed.end(); ++it) {
      if (!it.value().is_number()) {
        throw validation_error("evaluator metric '" + it.key() +
                               "' is not a number");
      }
      metrics[it.key()] = it.value().get<double>();
    }
    return metrics;
  };
}

struct SweepOpts {
  std::string input;
  std::string plans;
  std::string evaluator;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

RunOutput run_refine_sweep(const SweepOpts& o) {
  const auto samples = load_samples(o.input);
  const json plans_doc = load_json_file(o.plans);
  if (!plans_doc.is_array()) {
    throw validation_error(o.plans + ": expected a JSON array of plans");
  }
  std::vector<RefinePlan> plans;
  plans.reserve(plans_doc.size());
  for (const auto& pj : plans_doc) plans.push_back(plan_from_json(pj));

  const auto results = run_sweep(samples, plans, subprocess_evaluator(
                                     o.evaluator), o.seed, o.workers);
  json results_doc = json::array();
  std::size_t n_failed = 0;
  for (const auto& r : results) {
    if (r.failed) ++n_failed;
    results_doc.push_back(sweep_result_to_json(r));
  }
  write_text_file(o.out, results_doc.dump(2) + "\n");

  RunOutput run;
  run.report["n_plans"] = plans.size();
  run.report["n_failed"] = n_failed;
  run.report["out"] = o.out;
  run.summary = "swept " + std::to_string(plans.size()) + " plans (" +
                std::to_string(n_failed) + " failed)";
  return run;
}

struct SelectOpts {
  std::string input;
  std::string sweep;
  std::string out;
  std::string plan_out;
  std::vector<std::string> major_sources;
  std::uint64_t seed = 0;
};

RunOutput run_refine_select(const SelectOpts& o) {
  const auto samples = load_samples(o.input);
  const json results_doc = load_json_file(o.sweep);
  if (!results_doc.is_array()) {
    throw validation_error(o.sweep + ": expected a JSON array of results");
  }
  std::vector<SweepResult> results;
  results.reserve(results_doc.size());
  for (const auto& rj : results_doc) {
    results.push_back(sweep_result_from_json(rj));
  }

  CoreSetRule rule;
  rule.major_sources.insert(o.major_sources.begin(), o.major_sources.end());
  const auto selection = select_core_set(samples, results, rule, o.seed);
  save_samples(o.out, selection.samples);
  if (!o.plan_out.empty()) {
    write_text_file(o.plan_out, plan_to_json(selection.plan).dump(2) + "\n");
  }

  RunOutput run;
  run.report["n_input"] = samples.size();
  run.report["n_core_set"] = selection.samples.size();
  run.report["plan"] = plan_to_json(selection.plan);
  run.report["out"] = o.out;
  run.summary = "core set: " + std::to_string(selection.samples.size()) +
                "/" + std::to_string(samples.size()) + " samples";
  return run;
}

struct StatsOpts {
  std::string input;
};

RunOutput run_stats(const StatsOpts& o) {
  const auto samples = load_samples(o.input);
  RunOutput run;
  run.report = stats_to_json(compute_stats(samples));
  run.summary = "stats over " + std::to_string(samples.size()) + " samples";
  return run;
}

// ---------------------------------------------------------------------------
// eval

struct GroundingCliOpts {
  std::string benchmark;
  std::string grounder;  // endpoint URL, or "oracle" for the self-check
  std::string name = "benchmark";
  std::size_t workers = 8;
  int retries = 2;
  double timeout = 30.0;
  std::string token;
  int scale = 1000;
  bool image_uri = false;
};

RunOutput run_eval_grounding(const GroundingCliOpts& o) {
  const auto samples = load_benchmark(o.benchmark);

  std::unique_ptr<GrounderClient> client;
  if (o.grounder == "oracle") {
    client = make_benchmark_oracle(samples);
  } else {
    HttpClientConfig config;
    config.url = o.grounder;
    config.retries = o.retries;
    config.timeout_seconds = o.timeout;
    config.auth_token = o.token;
    config.send_image_base64 = !o.image_uri;
    config.over_one_scale = scale_from_int(o.scale);
    client = make_http_grounder(config);
  }

  GroundingEvalOptions options;
  options.benchmark_name = o.name;
  options.workers = o.workers;
  options.over_one_scale = scale_from_int(o.scale);
  const EvalReport report = eval_grounding(samples, *client, options);

  RunOutput run;
  run.report = eval_report_to_json(report);
  std::ostringstream s;
  s << "grounding accuracy " << report.accuracy_percent << "% ("
    << report.n_correct << "/" << report.n_samples << ")";
  run.summary = s.str();
  return run;
}

struct AgentCliOpts {
  std::string steps;
  std::string strategy = "two-stage";
  std::string planner;
  std::string grounder;
  std::string re_mode = "intent";
  double f1_threshold = 0.5;
  std::size_t workers = 8;
  int retries = 2;
  double timeout = 30.0;
  std::string token;
  bool image_uri = false;
};

RunOutput run_eval_agent(const AgentCliOpts& o) {
  const auto steps = load_steps(o.steps);

  AgentEvalOptions options;
  options.f1_threshold = o.f1_threshold;
  options.workers = o.workers;
  if (o.strategy == "two-stage") {
    options.strategy = AgentStrategy::kTwoStage;
  } else if (o.strategy == "som") {
    options.strategy = AgentStrategy::kSom;
  } else if (o.strategy == "planner-only") {
    options.strategy = AgentStrategy::kPlannerOnly;
  } else {
    throw config_error("--strategy must be two-stage, som, or planner-only");
  }
  if (o.re_mode == "intent") {
    options.re_mode = ReMode::kIntent;
  } else if (o.re_mode == "functionality") {
    options.re_mode = ReMode::kFunctionality;
  } else {
    throw config_error("--re-mode must be intent or functionality");
  }

  if (o.planner.empty()) {
    throw config_error("--planner URL is required (or set FORGE_PLANNER_URL)");
  }
  HttpClientConfig planner_config;
  planner_config.url = o.planner;
  planner_config.retries = o.retries;
  planner_config.timeout_seconds = o.timeout;
  planner_config.auth_token = o.token;
  planner_config.send_image_base64 = !o.image_uri;
  auto planner = make_http_planner(planner_config);

  std::unique_ptr<GrounderClient> grounder;
  if (options.strategy == AgentStrategy::kTwoStage) {
    if (o.grounder.empty()) {
      throw config_error(
          "--grounder URL is required for two-stage (or set "
          "FORGE_GROUNDER_URL)");
    }
    if (o.grounder == "oracle") {
      auto oracle = std::make_unique<OracleGrounder>();
      for (const auto& step : steps) {
        if (step.gt_bbox.has_value()) {
          oracle->add_image_answer(step.image_ref, *step.gt_bbox);
        }
      }
      grounder = std::move(oracle);
    } else {
      HttpClientConfig config = planner_config;
      config.url = o.grounder;
      grounder = make_http_grounder(config);
    }
  }

  const AgentEvalReport report =
      eval_trajectories(steps, *planner, grounder.get(), options);

  RunOutput run;
  run.report = agent_report_to_json(report);
  std::ostringstream s;
  s << "step SR " << report.step_sr << "% (" << report.n_success << "/"
    << report.n_steps << "), grounded-step accuracy "
    << report.grounded_success_percent << "%";
  run.summary = s.str();
  return run;
}

// ---------------------------------------------------------------------------
// bench

struct LatencyCliOpts {
  std::string endpoint;
  std::string image;
  std::string prompt_file;
  std::string prompt;
  std::size_t trials = kDefaultLatencyTrials;
  std::size_t warmup = kDefaultLatencyWarmup;
  bool image_uri = false;
};

RunOutput run_bench_latency(const LatencyCliOpts& o) {
  std::string prompt = o.prompt;
  if (prompt.empty() && !o.prompt_file.empty()) {
    prompt = read_text_file(o.prompt_file);
    while (!prompt.empty() && (prompt.back() == '\n' || prompt.back() == '\r')) {
      prompt.pop_back();
    }
  }
  if (prompt.empty()) {
    throw config_error("provide --prompt or --prompt-file");
  }
  const std::string payload =
      o.image_uri ? o.image : base64_encode(read_text_file(o.image));

  LatencyBenchOptions options;
  options.n_trials = o.trials;
  options.warmup = o.warmup;
  const LatencyBenchReport report =
      run_bench(o.endpoint, payload, prompt, options);

  RunOutput run;
  run.report = latency_report_to_json(report);
  std::ostringstream s;
  s << "TTFT mean " << report.ttft.mean * 1e3 << " ms, TPOT mean "
    << report.tpot.mean * 1e3 << " ms over " << report.n_trials_completed
    << " trials (" << report.n_failures << " failed)";
  run.summary = s.str();
  return run;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"forge: GUI grounding data engineering and evaluation toolkit"};
  app.set_config("--config", "", "TOML config file");
  std::string report_path;
  app.add_option("--report", report_path,
                 "write the JSON run report here instead of stdout");

  RunOutput run;
  std::string command;
  // Effective configuration mirrored into the run report for provenance.
  json effective = json::object();
  auto remember = [&effective](const std::string& key, const json& value) {
    effective[key] = value;
  };

  // ingest ------------------------------------------------------------------
  IngestOpts ingest_opts;
  CLI::App* ingest = app.add_subcommand(
      "ingest", "expand GUI metadata records into grounding samples");
  ingest->add_option("--input", ingest_opts.inputs, "record JSONL file(s)")
      ->required();
  ingest->add_option("--source", ingest_opts.source,
                     "source tag for records lacking one");
  ingest->add_option("--out", ingest_opts.out, "output samples JSONL")
      ->required();
  ingest->add_flag("--no-reg", ingest_opts.no_reg, "skip REG reverse tasks");
  ingest->add_flag("--no-widget-listing", ingest_opts.no_widget_listing,
                   "skip widget-listing samples");
  ingest->add_option("--era-cutoff", ingest_opts.era_cutoff,
                     "era-flag records older than this year");
  ingest->callback([&] {
    command = "ingest";
    remember("input", ingest_opts.inputs);
    remember("source", ingest_opts.source);
    remember("out", ingest_opts.out);
    remember("no_reg", ingest_opts.no_reg);
    remember("no_widget_listing", ingest_opts.no_widget_listing);
    remember("era_cutoff", ingest_opts.era_cutoff);
    run = run_ingest(ingest_opts);
  });

  // denoise -----------------------------------------------------------------
  DenoiseOpts denoise_opts;
  CLI::App* denoise = app.add_subcommand(
      "denoise", "drop blank/invisible, invalid-bbox, and OCR-mismatched "
                 "elements");
  denoise->add_option("--input", denoise_opts.input, "record JSONL file")
      ->required();
  denoise->add_option("--out", denoise_opts.out, "output record JSONL")
      ->required();
  denoise->add_option("--ocr", denoise_opts.ocr,
                      "none | oracle | external:<cmd>");
  denoise->add_option("--ocr-threshold", denoise_opts.threshold,
                      "similarity threshold in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  denoise->callback([&] {
    command = "denoise";
    remember("input", denoise_opts.input);
    remember("out", denoise_opts.out);
    remember("ocr", denoise_opts.ocr);
    remember("ocr_threshold", denoise_opts.threshold);
    run = run_denoise(denoise_opts);
  });

  // dedup -------------------------------------------------------------------
  DedupOpts dedup_opts;
  CLI::App* dedup = app.add_subcommand(
      "dedup", "remove redundant samples by discretized box and cleaned RE");
  dedup->add_option("--input", dedup_opts.input, "samples JSONL")->required();
  dedup->add_option("--out", dedup_opts.out, "output samples JSONL")
      ->required();
  dedup->add_option("--seed", dedup_opts.seed,
                    "RNG seed for representative choice (default 0)");
  dedup->callback([&] {
    command = "dedup";
    remember("input", dedup_opts.input);
    remember("out", dedup_opts.out);
    remember("seed", dedup_opts.seed);
    run = run_dedup(dedup_opts);
  });

  // refine ------------------------------------------------------------------
  CLI::App* refine = app.add_subcommand(
      "refine", "progressive data refinement (coarse / plan / sweep / select)");
  refine->require_subcommand(1);

  CoarseOpts coarse_opts;
  CLI::App* coarse = refine->add_subcommand(
      "coarse", "drop task categories and outdated-GUI samples");
  coarse->add_option("--input", coarse_opts.input, "samples JSONL")
      ->required();
  coarse->add_option("--out", coarse_opts.out, "output samples JSONL")
      ->required();
  coarse->add_flag("--drop-reg", coarse_opts.drop_reg, "drop the REG tasks");
  coarse->add_option("--drop-task-types", coarse_opts.drop_task_types,
                     "additional task types to drop");
  coarse->add_flag("--drop-outdated", coarse_opts.drop_outdated,
                   "drop era-flagged samples and outdated sources");
  coarse->add_option("--outdated-sources", coarse_opts.outdated_sources,
                     "source tags treated as outdated");
  coarse->callback([&] {
    command = "refine coarse";
    remember("input", coarse_opts.input);
    remember("out", coarse_opts.out);
    remember("drop_reg", coarse_opts.drop_reg);
    remember("drop_task_types", coarse_opts.drop_task_types);
    remember("drop_outdated", coarse_opts.drop_outdated);
    remember("outdated_sources", coarse_opts.outdated_sources);
    run = run_refine_coarse(coarse_opts);
  });

  PlanOpts plan_opts;
  CLI::App* plan = refine->add_subcommand(
      "plan", "build a one-factor-at-a-time ratio sweep");
  plan->add_option("--sources", plan_opts.sources, "source tags to sweep")
      ->required();
  plan->add_option("--task-types", plan_opts.task_types,
                   "task types to sweep (default: all)");
  plan->add_option("--ratios", plan_opts.ratios, "inclusion ratio grid")
      ->required();
  plan->add_option("--out", plan_opts.out, "output plans JSON")->required();
  plan->callback([&] {
    command = "refine plan";
    remember("sources", plan_opts.sources);
    remember("task_types", plan_opts.task_types);
    remember("ratios", plan_opts.ratios);
    remember("out", plan_opts.out);
    run = run_refine_plan(plan_opts);
  });

  SweepOpts sweep_opts;
  sweep_opts.workers = default_workers();
  CLI::App* sweep = refine->add_subcommand(
      "sweep", "evaluate every plan's subset with an external evaluator");
  sweep->add_option("--input", sweep_opts.input, "samples JSONL")->required();
  sweep->add_option("--plans", sweep_opts.plans, "plans JSON")->required();
  sweep->add_option("--evaluator", sweep_opts.evaluator,
                    "command run as `<cmd> <subset-path>`; prints a JSON "
                    "metric map")
      ->required();
  sweep->add_option("--out", sweep_opts.out, "output results JSON")
      ->required();
  sweep->add_option("--seed", sweep_opts.seed, "subset extraction seed");
  sweep->add_option("--workers", sweep_opts.workers, "parallel evaluations");
  sweep->callback([&] {
    command = "refine sweep";
    remember("input", sweep_opts.input);
    remember("plans", sweep_opts.plans);
    remember("evaluator", sweep_opts.evaluator);
    remember("out", sweep_opts.out);
    remember("seed", sweep_opts.seed);
    remember("workers", sweep_opts.workers);
    run = run_refine_sweep(sweep_opts);
  });

  SelectOpts select_opts;
  CLI::App* select = refine->add_subcommand(
      "select", "compose the core-set plan from sweep results and extract it");
  select->add_option("--input", select_opts.input, "samples JSONL")
      ->required();
  select->add_option("--sweep", select_opts.sweep, "sweep results JSON")
      ->required();
  select->add_option("--out", select_opts.out, "output core set JSONL")
      ->required();
  select->add_option("--plan-out", select_opts.plan_out,
                     "also write the composed plan JSON here");
  select->add_option("--major-sources", select_opts.major_sources,
                     "sources subject to ratio selection (default: sources "
                     "present in the sweep)");
  select->add_option("--seed", select_opts.seed, "subset extraction seed");
  select->callback([&] {
    command = "refine select";
    remember("input", select_opts.input);
    remember("sweep", select_opts.sweep);
    remember("out", select_opts.out);
    remember("plan_out", select_opts.plan_out);
    remember("major_sources", select_opts.major_sources);
    remember("seed", select_opts.seed);
    run = run_refine_select(select_opts);
  });

  // stats -------------------------------------------------------------------
  StatsOpts stats_opts;
  CLI::App* stats = app.add_subcommand(
      "stats", "task/source/length/area statistics of a sample set");
  stats->add_option("--input", stats_opts.input, "samples JSONL")->required();
  stats->callback([&] {
    command = "stats";
    remember("input", stats_opts.input);
    run = run_stats(stats_opts);
  });

  // eval --------------------------------------------------------------------
  CLI::App* eval = app.add_subcommand("eval", "evaluate external models");
  eval->require_subcommand(1);

  GroundingCliOpts grounding_opts;
  CLI::App* grounding = eval->add_subcommand(
      "grounding", "point-in-box grounding accuracy over a benchmark");
  grounding->add_option("--benchmark", grounding_opts.benchmark,
                        "benchmark JSONL")
      ->required();
  grounding
      ->add_option("--grounder", grounding_opts.grounder,
                   "grounder endpoint URL, or 'oracle' for a harness "
                   "self-check")
      ->envname("FORGE_GROUNDER_URL")
      ->required();
  grounding->add_option("--name", grounding_opts.name, "benchmark name");
  grounding->add_option("--workers", grounding_opts.workers,
                        "parallel requests");
  grounding->add_option("--retries", grounding_opts.retries,
                        "transport retries per sample");
  grounding->add_option("--timeout", grounding_opts.timeout,
                        "per-request timeout seconds");
  grounding->add_option("--token", grounding_opts.token, "bearer token")
      ->envname("FORGE_API_TOKEN");
  grounding->add_option("--scale", grounding_opts.scale,
                        "scale of model coordinates above 1 (1000 or 100)");
  grounding->add_flag("--image-uri", grounding_opts.image_uri,
                      "send image references instead of base64 payloads");
  grounding->callback([&] {
    command = "eval grounding";
    remember("benchmark", grounding_opts.benchmark);
    remember("grounder", grounding_opts.grounder);
    remember("name", grounding_opts.name);
    remember("workers", grounding_opts.workers);
    remember("retries", grounding_opts.retries);
    remember("scale", grounding_opts.scale);
    remember("image_uri", grounding_opts.image_uri);
    run = run_eval_grounding(grounding_opts);
  });

  AgentCliOpts agent_opts;
  CLI::App* agent = eval->add_subcommand(
      "agent", "offline GUI-agent step success rate over stored trajectories");
  agent->add_option("--steps", agent_opts.steps, "trajectory JSONL")
      ->required();
  agent->add_option("--strategy", agent_opts.strategy,
                    "two-stage | som | planner-only");
  agent->add_option("--planner", agent_opts.planner, "planner endpoint URL")
      ->envname("FORGE_PLANNER_URL");
  agent->add_option("--grounder", agent_opts.grounder,
                    "grounder endpoint URL, or 'oracle' for a self-check")
      ->envname("FORGE_GROUNDER_URL");
  agent->add_option("--re-mode", agent_opts.re_mode,
                    "intent | functionality");
  agent->add_option("--f1-threshold", agent_opts.f1_threshold,
                    "strict text-match threshold");
  agent->add_option("--workers", agent_opts.workers, "parallel steps");
  agent->add_option("--retries", agent_opts.retries, "transport retries");
  agent->add_option("--timeout", agent_opts.timeout,
                    "per-request timeout seconds");
  agent->add_option("--token", agent_opts.token, "bearer token")
      ->envname("FORGE_API_TOKEN");
  agent->add_flag("--image-uri", agent_opts.image_uri,
                  "send image references instead of base64 payloads");
  agent->callback([&] {
    command = "eval agent";
    remember("steps", agent_opts.steps);
    remember("strategy", agent_opts.strategy);
    remember("planner", agent_opts.planner);
    remember("grounder", agent_opts.grounder);
    remember("re_mode", agent_opts.re_mode);
    remember("f1_threshold", agent_opts.f1_threshold);
    remember("workers", agent_opts.workers);
    run = run_eval_agent(agent_opts);
  });

  // bench -------------------------------------------------------------------
  CLI::App* bench = app.add_subcommand("bench", "performance benchmarks");
  bench->require_subcommand(1);

  LatencyCliOpts latency_opts;
  CLI::App* latency = bench->add_subcommand(
      "latency", "TTFT/TPOT against a token-streaming endpoint");
  latency->add_option("--endpoint", latency_opts.endpoint, "endpoint URL")
      ->required();
  latency->add_option("--image", latency_opts.image, "image file or URI")
      ->required();
  latency->add_option("--prompt-file", latency_opts.prompt_file,
                      "file holding the prompt");
  latency->add_option("--prompt", latency_opts.prompt, "inline prompt");
  latency->add_option("--trials", latency_opts.trials,
                      "measured trials (default 2000)");
  latency->add_option("--warmup", latency_opts.warmup,
                      "discarded warmup trials");
  latency->add_flag("--image-uri", latency_opts.image_uri,
                    "send the image reference instead of base64");
  latency->callback([&] {
    command = "bench latency";
    remember("endpoint", latency_opts.endpoint);
    remember("image", latency_opts.image);
    remember("trials", latency_opts.trials);
    remember("warmup", latency_opts.warmup);
    remember("image_uri", latency_opts.image_uri);
    run = run_bench_latency(latency_opts);
  });

  // ---------------------------------------------------------------------------
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("forge");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ExtrasError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 64;
  } catch (const CLI::RequiredError& e) {
    // A missing subcommand is a usage error; a missing flag is a validation
    // error naming the flag.
    const std::string what = e.what();
    if (what.find("subcommand") != std::string::npos) {
      err << "error: " << what << "\n" << app.help();
      return 64;
    }
    err << "error: " << what << "\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const transport_error& e) {
    err << "transport error: " << e.what() << "\n";
    return 2;
  } catch (const io_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return 1;
  } catch (const validation_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  if (command.empty()) {
    err << app.help();
    return 64;
  }

  json report = json::object();
  report["command"] = command;
  report["config"] = std::move(effective);
  for (auto it = run.report.begin(); it != run.report.end(); ++it) {
    report[it.key()] = it.value();
  }
  const std::string dumped = report.dump(2) + "\n";
  if (report_path.empty()) {
    out << dumped;
  } else {
    write_text_file(report_path, dumped);
  }
  err << run.summary << "\n";
  return 0;
}

}  // namespace forge::cli
