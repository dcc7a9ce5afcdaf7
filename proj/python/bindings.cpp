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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "forge/agent.hpp"
#include "forge/clients.hpp"
#include "forge/dedup.hpp"
#include "forge/errors.hpp"
#include "forge/geometry.hpp"
#include "forge/ingest.hpp"
#include "forge/jsonl.hpp"
#include "forge/latency.hpp"
#include "forge/refine.hpp"
#include "forge/types.hpp"

namespace py = pybind11;

namespace {

forge::LatencyTrace make_trace(double t_submit, double t_first_token,
                               double t_end, int n_output_tokens) {
  return forge::LatencyTrace{t_submit, t_first_token, t_end, n_output_tokens};
}

py::object parse_coords_py(const std::string& raw, const std::string& scale) {
  forge::OverOneScale s = forge::OverOneScale::kThousandths;
  if (scale == "percent") {
    s = forge::OverOneScale::kPercent;
  } else if (scale != "thousandths") {
    throw forge::validation_error("scale must be 'thousandths' or 'percent'");
  }
  const auto coords = forge::parse_coords(raw, s);
  if (!coords.has_value()) return py::none();
  py::dict out;
  if (coords->point.has_value()) {
    out["point"] = py::make_tuple(coords->point->x, coords->point->y);
  }
  if (coords->box.has_value()) {
    out["box"] = py::make_tuple(coords->box->x1, coords->box->y1,
                                coords->box->x2, coords->box->y2);
  }
  const auto p = coords->as_point();
  out["as_point"] = py::make_tuple(p.x, p.y);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "forge core: GUI grounding data engineering and evaluation";

  py::register_exception<forge::validation_error>(m, "ValidationError",
                                                  PyExc_ValueError);

  py::class_<forge::NormPoint>(m, "NormPoint")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &forge::NormPoint::x)
      .def_readwrite("y", &forge::NormPoint::y)
      .def("valid", &forge::NormPoint::valid)
      .def("__repr__", [](const forge::NormPoint& p) {
        return forge::format_point(p);
      });

  py::class_<forge::NormBBox>(m, "NormBBox")
      .def(py::init<double, double, double, double>(), py::arg("x1"),
           py::arg("y1"), py::arg("x2"), py::arg("y2"))
      .def_readwrite("x1", &forge::NormBBox::x1)
      .def_readwrite("y1", &forge::NormBBox::y1)
      .def_readwrite("x2", &forge::NormBBox::x2)
      .def_readwrite("y2", &forge::NormBBox::y2)
      .def("valid", &forge::NormBBox::valid)
      .def("degenerate", &forge::NormBBox::degenerate)
      .def("area", &forge::NormBBox::area)
      .def("__repr__", [](const forge::NormBBox& b) {
        return forge::format_bbox(b);
      });

  py::enum_<forge::TaskType>(m, "TaskType")
      .value("TEXT_GROUNDING", forge::TaskType::kTextGrounding)
      .value("BRIEF_DESC_GROUNDING", forge::TaskType::kBriefDescGrounding)
      .value("INTENT_GROUNDING", forge::TaskType::kIntentGrounding)
      .value("FUNCTIONALITY_GROUNDING",
             forge::TaskType::kFunctionalityGrounding)
      .value("TEXT_REG", forge::TaskType::kTextReg)
      .value("BRIEF_DESC_REG", forge::TaskType::kBriefDescReg)
      .value("FUNCTIONALITY_REG", forge::TaskType::kFunctionalityReg)
      .value("WIDGET_LISTING", forge::TaskType::kWidgetListing);

  py::class_<forge::GuiElement>(m, "GuiElement")
      .def(py::init<>())
      .def_readwrite("element_id", &forge::GuiElement::element_id)
      .def_readwrite("bbox", &forge::GuiElement::bbox)
      .def_readwrite("visible", &forge::GuiElement::visible)
      .def_readwrite("alt_text", &forge::GuiElement::alt_text)
      .def_readwrite("rendered_text", &forge::GuiElement::rendered_text)
      .def_readwrite("category", &forge::GuiElement::category)
      .def_readwrite("brief_description", &forge::GuiElement::brief_description)
      .def_readwrite("action_intent", &forge::GuiElement::action_intent)
      .def_readwrite("functionality", &forge::GuiElement::functionality)
      .def("blank", &forge::GuiElement::blank);

  py::class_<forge::ScreenshotRecord>(m, "ScreenshotRecord")
      .def(py::init<>())
      .def_readwrite("record_id", &forge::ScreenshotRecord::record_id)
      .def_readwrite("image_ref", &forge::ScreenshotRecord::image_ref)
      .def_readwrite("width_px", &forge::ScreenshotRecord::width_px)
      .def_readwrite("height_px", &forge::ScreenshotRecord::height_px)
      .def_readwrite("source", &forge::ScreenshotRecord::source)
      .def_readwrite("gui_era", &forge::ScreenshotRecord::gui_era)
      .def_readwrite("elements", &forge::ScreenshotRecord::elements);

  py::class_<forge::GroundingSample>(m, "GroundingSample")
      .def(py::init<>())
      .def_readwrite("sample_id", &forge::GroundingSample::sample_id)
      .def_readwrite("record_id", &forge::GroundingSample::record_id)
      .def_readwrite("image_ref", &forge::GroundingSample::image_ref)
      .def_readwrite("task_type", &forge::GroundingSample::task_type)
      .def_readwrite("re_text", &forge::GroundingSample::re_text)
      .def_readwrite("target_bbox", &forge::GroundingSample::target_bbox)
      .def_readwrite("source", &forge::GroundingSample::source)
      .def_readwrite("era_flag", &forge::GroundingSample::era_flag)
      .def("to_json", [](const forge::GroundingSample& s) {
        return forge::sample_to_json(s).dump();
      })
      .def_static("from_json", [](const std::string& text) {
        return forge::sample_from_json(forge::json::parse(text));
      });

  // geometry
  m.def("to_pixel", &forge::to_pixel, py::arg("bbox"), py::arg("width_px"),
        py::arg("height_px"));
  m.def("center", &forge::center, py::arg("bbox"));
  m.def("point_in_bbox", &forge::point_in_bbox, py::arg("point"),
        py::arg("bbox"), "Boundary-inclusive containment test.");

  // dedup
  m.def("discretize_bbox", &forge::discretize_bbox, py::arg("bbox"),
        "round(coord*100), half away from zero, clamped to [0,100].");
  m.def("clean_re", [](const std::string& s) { return forge::clean_re(s); },
        py::arg("text"),
        "Strip punctuation, lowercase, collapse whitespace.");
  m.def(
      "dedup_samples",
      [](const std::vector<forge::GroundingSample>& samples,
         std::uint64_t seed) {
        forge::DedupStats stats;
        auto kept = forge::dedup_samples(samples, seed, &stats);
        py::dict d;
        d["n_input"] = stats.n_input;
        d["n_groups"] = stats.n_groups;
        d["n_kept"] = stats.n_kept;
        d["n_dropped"] = stats.n_dropped;
        return py::make_tuple(std::move(kept), std::move(d));
      },
      py::arg("samples"), py::arg("seed") = 0,
      "Returns (kept_samples, stats).");

  // ingestion
  m.def("make_sample_id", &forge::make_sample_id, py::arg("record_id"),
        py::arg("element_id"), py::arg("task_type"));
  m.def(
      "generate_samples",
      [](const forge::ScreenshotRecord& r) {
        return forge::generate_samples(r);
      },
      py::arg("record"));
  m.def(
      "generate_reg_samples",
      [](const forge::ScreenshotRecord& r) {
        return forge::generate_reg_samples(r);
      },
      py::arg("record"));
  m.def(
      "generate_widget_listing",
      [](const forge::ScreenshotRecord& r) {
        return forge::generate_widget_listing(r);
      },
      py::arg("record"));

  // refinement
  py::class_<forge::CoarsePolicy>(m, "CoarsePolicy")
      .def(py::init<>())
      .def_readwrite("drop_reg", &forge::CoarsePolicy::drop_reg)
      .def_readwrite("drop_outdated", &forge::CoarsePolicy::drop_outdated)
      .def_readwrite("outdated_sources",
                     &forge::CoarsePolicy::outdated_sources)
      .def_readwrite("drop_task_types", &forge::CoarsePolicy::drop_task_types);

  py::class_<forge::RefinePlan>(m, "RefinePlan")
      .def(py::init<>())
      .def_readwrite("default_ratio", &forge::RefinePlan::default_ratio)
      .def("set_ratio",
           [](forge::RefinePlan& plan, const std::string& source,
              forge::TaskType task, double ratio) {
             plan.ratios[forge::BucketKey{source, task}] = ratio;
           },
           py::arg("source"), py::arg("task_type"), py::arg("ratio"));

  m.def(
      "coarse_filter",
      [](const std::vector<forge::GroundingSample>& samples,
         const forge::CoarsePolicy& policy) {
        return forge::coarse_filter(samples, policy);
      },
      py::arg("samples"), py::arg("policy"));
  m.def("extract_subset", &forge::extract_subset, py::arg("samples"),
        py::arg("plan"), py::arg("seed") = 0);

  // metrics
  m.def("token_f1", &forge::token_f1, py::arg("pred"), py::arg("gt"),
        "Whitespace-token multiset F1 over lowercased strings.");
  m.def("step_success_rate", &forge::step_success_rate, py::arg("results"));
  m.def(
      "compute_ttft",
      [](double t_submit, double t_first_token, double t_end, int tokens) {
        return forge::compute_ttft(
            make_trace(t_submit, t_first_token, t_end, tokens));
      },
      py::arg("t_submit"), py::arg("t_first_token"), py::arg("t_end"),
      py::arg("n_output_tokens"));
  m.def(
      "compute_tpot",
      [](double t_submit, double t_first_token, double t_end,
         int tokens) -> py::object {
        const auto tpot = forge::compute_tpot(
            make_trace(t_submit, t_first_token, t_end, tokens));
        if (!tpot.has_value()) return py::none();
        return py::float_(*tpot);
      },
      py::arg("t_submit"), py::arg("t_first_token"), py::arg("t_end"),
      py::arg("n_output_tokens"),
      "None for single-token responses.");
  m.def("median_prompt", &forge::median_prompt, py::arg("prompts"),
        "Median-length prompt, lower median on ties.");

  // client-side parsing
  m.def("parse_coords", &parse_coords_py, py::arg("raw"),
        py::arg("scale") = "thousandths",
        "Extract a point or box from raw model text; None on failure.");

  m.attr("DEFAULT_LATENCY_TRIALS") = forge::kDefaultLatencyTrials;
  m.attr("__version__") = "0.1.0";
}
