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

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "forge/jsonx.hpp"

namespace fs = std::filesystem;
using namespace forge;

namespace {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
  json report;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  if (r.code == 0 && !r.out.empty()) {
    r.report = json::parse(r.out, nullptr, false);
  }
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("forge_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Deterministic 50-record fixture: mixed sources, eras, visibilities, some
// invalid boxes, some rendering faults, plus two malformed lines.
void write_fixture(const fs::path& path) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::ofstream out(path);
  REQUIRE(out);
  const char* sources[] = {"webui", "autogui", "wae"};
  for (int i = 0; i < 50; ++i) {
    json record;
    record["record_id"] = "rec" + std::to_string(i);
    record["image"] = "img" + std::to_string(i) + ".png";
    record["width"] = 360;
    record["height"] = 780;
    record["source"] = sources[i % 3];
    record["platform"] = i % 2 ? "mobile" : "web";
    if (i % 3 == 2) record["era"] = 2011;
    json elements = json::array();
    const int n_elements = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n_elements; ++k) {
      json e;
      e["id"] = "e" + std::to_string(k);
      double x1 = unit(rng) * 0.8, y1 = unit(rng) * 0.8;
      double x2 = x1 + 0.05 + unit(rng) * 0.1;
      double y2 = y1 + 0.02 + unit(rng) * 0.05;
      if (rng() % 7 == 0) x2 = 1.2;  // invalid: beyond the border
      e["bbox"] = {x1, y1, x2, y2};
      e["visible"] = rng() % 5 != 0;
      const int what = static_cast<int>(rng() % 5);
      if (what == 0) {
        e["category"] = "text";
        e["alt_text"] = "Label " + std::to_string(rng() % 8);
        e["rendered_text"] = rng() % 4 == 0
                                 ? "something else entirely"
                                 : e["alt_text"].get<std::string>();
      } else if (what == 1) {
        e["alt_text"] = "Icon " + std::to_string(rng() % 8);
        e["functionality"] =
            "This element enables users to do thing " +
            std::to_string(rng() % 8);
      } else if (what == 2) {
        e["brief_description"] = "a button at slot " + std::to_string(k);
      } else if (what == 3) {
        e["action_intent"] = "focus on field " + std::to_string(rng() % 8);
      }  // what == 4: blank element
      elements.push_back(e);
    }
    record["elements"] = elements;
    out << record.dump() << "\n";
    if (i == 20) out << "this line is not json\n";
    if (i == 40) out << R"({"record_id":"broken"})" << "\n";
  }
}

}  // namespace

TEST_CASE("help exits 0, unknown subcommands exit 64") {
  CHECK(run_cli({"--help"}).code == 0);
  CHECK(run_cli({}).code == 64);
  const CliResult unknown = run_cli({"frobnicate"});
  CHECK(unknown.code == 64);
}

TEST_CASE("a missing required flag exits 1 and names the flag") {
  const CliResult r = run_cli({"dedup"});
  CHECK(r.code == 1);
  CHECK(r.err.find("--input") != std::string::npos);
}

TEST_CASE("unreadable inputs exit 1") {
  const CliResult r = run_cli(
      {"dedup", "--input", "/no/such/file.jsonl", "--out", "/tmp/x.jsonl"});
  CHECK(r.code == 1);
}

TEST_CASE("the composed pipeline is byte-identical across reruns") {
  const fs::path dir = fresh_dir("pipeline");
  const fs::path records = dir / "records.jsonl";
  write_fixture(records);

  // Sweep evaluator: line count of the subset, a pure function of the file.
  const std::string evaluator =
      "python3 -c 'import sys,json;"
      "print(json.dumps({\"lines\": sum(1 for _ in open(sys.argv[1]))}))'";

  auto run_pipeline = [&](const std::string& tag) {
    const fs::path stage = dir / tag;
    fs::create_directories(stage);
    const std::string clean = (stage / "clean.jsonl").string();
    const std::string samples = (stage / "samples.jsonl").string();
    const std::string dedup = (stage / "dedup.jsonl").string();
    const std::string coarse = (stage / "coarse.jsonl").string();
    const std::string plans = (stage / "plans.json").string();
    const std::string swept = (stage / "results.json").string();
    const std::string coreset = (stage / "coreset.jsonl").string();

    CHECK(run_cli({"denoise", "--input", records.string(), "--out", clean,
                   "--ocr", "oracle", "--ocr-threshold", "0.8"})
              .code == 0);
    CHECK(run_cli({"ingest", "--input", clean, "--source", "fixture",
                   "--out", samples, "--era-cutoff", "2017"})
              .code == 0);
    CHECK(run_cli({"dedup", "--input", samples, "--out", dedup, "--seed",
                   "17"})
              .code == 0);
    CHECK(run_cli({"refine", "coarse", "--input", dedup, "--out", coarse,
                   "--drop-reg", "--drop-outdated", "--outdated-sources",
                   "wae"})
              .code == 0);
    // No --task-types: sweep all of them so select has full bucket coverage
    // for the two major sources.
    CHECK(run_cli({"refine", "plan", "--sources", "webui", "autogui",
                   "--ratios", "0.5", "1.0", "--out", plans})
              .code == 0);
    CHECK(run_cli({"refine", "sweep", "--input", coarse, "--plans", plans,
                   "--evaluator", evaluator, "--out", swept, "--seed", "17",
                   "--workers", "2"})
              .code == 0);
    CHECK(run_cli({"refine", "select", "--input", coarse, "--sweep", swept,
                   "--out", coreset, "--seed", "17"})
              .code == 0);
    return std::vector<std::string>{slurp(clean),   slurp(samples),
                                    slurp(dedup),   slurp(coarse),
                                    slurp(plans),   slurp(swept),
                                    slurp(coreset)};
  };

  const auto first = run_pipeline("a");
  const auto second = run_pipeline("b");
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i] == second[i]);
  }
  CHECK_FALSE(first[6].empty());
}

TEST_CASE("run reports carry stage counts that reconcile") {
  const fs::path dir = fresh_dir("report");
  const fs::path records = dir / "records.jsonl";
  write_fixture(records);
  const std::string clean = (dir / "clean.jsonl").string();

  const CliResult denoise =
      run_cli({"denoise", "--input", records.string(), "--out", clean,
               "--ocr", "oracle"});
  REQUIRE(denoise.code == 0);
  REQUIRE_FALSE(denoise.report.is_discarded());
  CHECK(denoise.report["command"] == "denoise");
  CHECK(denoise.report["reconciled"] == true);
  const auto in_count = denoise.report["n_elements_in"].get<std::size_t>();
  const auto kept = denoise.report["n_elements_kept"].get<std::size_t>();
  const auto dropped =
      denoise.report["n_blank_invisible"].get<std::size_t>() +
      denoise.report["n_invalid_bbox"].get<std::size_t>() +
      denoise.report["n_ocr_mismatch"].get<std::size_t>();
  CHECK(kept + dropped == in_count);
  CHECK(denoise.report["config"]["ocr"] == "oracle");
  CHECK(denoise.err.find("denoised") != std::string::npos);

  const std::string samples = (dir / "samples.jsonl").string();
  REQUIRE(run_cli({"ingest", "--input", clean, "--source", "t", "--out",
                   samples})
              .code == 0);
  const CliResult stats = run_cli({"stats", "--input", samples});
  REQUIRE(stats.code == 0);
  CHECK(stats.report["n_total"].get<std::size_t>() > 0);
}

TEST_CASE("an external OCR subprocess speaks the line-JSON protocol") {
  const fs::path dir = fresh_dir("ocr");
  const fs::path script = dir / "fake_ocr.py";
  {
    std::ofstream py(script);
    py << "import sys, json\n"
          "for line in sys.stdin:\n"
          "    req = json.loads(line)\n"
          "    assert 'image' in req and len(req['bbox_px']) == 4\n"
          "    print(json.dumps({'text': 'Login'}), flush=True)\n";
  }
  const fs::path records = dir / "records.jsonl";
  {
    std::ofstream out(records);
    json rec = {
        {"record_id", "r1"},
        {"image", "img.png"},
        {"width", 100},
        {"height", 100},
        {"elements",
         json::array(
             {{{"id", "keep"},
               {"bbox", {0.1, 0.1, 0.4, 0.2}},
               {"category", "text"},
               {"alt_text", "Login"}},
              {{"id", "drop"},
               {"bbox", {0.1, 0.4, 0.4, 0.5}},
               {"category", "text"},
               {"alt_text", "Checkout now"}}})},
    };
    out << rec.dump() << "\n";
  }
  const std::string clean = (dir / "clean.jsonl").string();
  const CliResult r =
      run_cli({"denoise", "--input", records.string(), "--out", clean,
               "--ocr", "external:python3 " + script.string()});
  REQUIRE(r.code == 0);
  CHECK(r.report["n_ocr_mismatch"] == 1);
  CHECK(r.report["n_elements_kept"] == 1);
  const std::string kept = slurp(clean);
  CHECK(kept.find("\"keep\"") != std::string::npos);
  CHECK(kept.find("\"drop\"") == std::string::npos);
}

TEST_CASE("eval grounding with the oracle self-check reports 100") {
  const fs::path dir = fresh_dir("evalg");
  const fs::path bench = dir / "bench.jsonl";
  {
    std::ofstream out(bench);
    for (int i = 0; i < 3; ++i) {
      json s = {{"image", "i" + std::to_string(i) + ".png"},
                {"prompt", "el " + std::to_string(i)},
                {"bbox", {0.2, 0.2, 0.4, 0.4}},
                {"split", i % 2 ? "mobile" : "web"}};
      out << s.dump() << "\n";
    }
  }
  const CliResult r = run_cli({"eval", "grounding", "--benchmark",
                               bench.string(), "--grounder", "oracle",
                               "--name", "self-check"});
  REQUIRE(r.code == 0);
  CHECK(r.report["accuracy_percent"] == 100.0);
  CHECK(r.report["benchmark"] == "self-check");
  CHECK(r.report["splits"].size() == 2);
}

TEST_CASE("transport failures on every sample exit 2") {
  const fs::path dir = fresh_dir("evalt");
  const fs::path bench = dir / "bench.jsonl";
  {
    std::ofstream out(bench);
    out << json{{"image", "i.png"},
                {"prompt", "el"},
                {"bbox", {0.2, 0.2, 0.4, 0.4}}}
               .dump()
        << "\n";
  }
  const CliResult r = run_cli(
      {"eval", "grounding", "--benchmark", bench.string(), "--grounder",
       "http://127.0.0.1:9/ground", "--retries", "0", "--timeout", "2",
       "--image-uri"});
  CHECK(r.code == 2);
}

TEST_CASE("a report file lands on disk when requested") {
  const fs::path dir = fresh_dir("reportfile");
  const fs::path samples = dir / "samples.jsonl";
  {
    std::ofstream out(samples);
    out << json{{"sample_id", "s1"},     {"record_id", "r"},
                {"image", "i.png"},      {"task_type", "text_grounding"},
                {"re", "x"},             {"bbox", {0.1, 0.1, 0.2, 0.2}},
                {"source", "s"},         {"era_flag", false}}
               .dump()
        << "\n";
  }
  const fs::path report = dir / "report.json";
  const CliResult r =
      run_cli({"--report", report.string(), "stats", "--input",
               samples.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());  // the report went to the file instead
  const json loaded = json::parse(slurp(report));
  CHECK(loaded["n_total"] == 1);
}
