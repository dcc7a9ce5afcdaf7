# Copyright 2026 The Forge Authors.
# Licensed under the Apache License, Version 2.0.
"""Python bindings for the forge GUI-grounding toolkit core."""

from ._core import (  # noqa: F401
    DEFAULT_LATENCY_TRIALS,
    CoarsePolicy,
    GroundingSample,
    GuiElement,
    NormBBox,
    NormPoint,
    RefinePlan,
    ScreenshotRecord,
    TaskType,
    ValidationError,
    center,
    clean_re,
    coarse_filter,
    compute_tpot,
    compute_ttft,
    dedup_samples,
    discretize_bbox,
    extract_subset,
    generate_reg_samples,
    generate_samples,
    generate_widget_listing,
    make_sample_id,
    median_prompt,
    parse_coords,
    point_in_bbox,
    step_success_rate,
    to_pixel,
    token_f1,
)

__version__ = "0.1.0"
