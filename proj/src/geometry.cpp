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
#include "forge/geometry.hpp"

#include <string>

#include "forge/errors.hpp"

namespace forge {

bool NormBBox::valid() const {
  return 0.0 <= x1 && x1 <= x2 && x2 <= 1.0 && 0.0 <= y1 && y1 <= y2 &&
         y2 <= 1.0;
}

bool NormBBox::degenerate() const { return x1 == x2 || y1 == y2; }

bool NormPoint::valid() const {
  return 0.0 <= x && x <= 1.0 && 0.0 <= y && y <= 1.0;
}

PixelBox to_pixel(const NormBBox& b, int width_px, int height_px) {
  if (!b.valid()) {
    throw validation_error("to_pixel: box is not a valid normalized box");
  }
  if (width_px <= 0 || height_px <= 0) {
    throw validation_error("to_pixel: image dimensions must be positive, got " +
                           std::to_string(width_px) + "x" +
                           std::to_string(height_px));
  }
  return {b.x1 * width_px, b.y1 * height_px, b.x2 * width_px,
          b.y2 * height_px};
}

NormBBox from_pixel(const PixelBox& px, int width_px, int height_px) {
  if (width_px <= 0 || height_px <= 0) {
    throw validation_error(
        "from_pixel: image dimensions must be positive, got " +
        std::to_string(width_px) + "x" + std::to_string(height_px));
  }
  return {px[0] / width_px, px[1] / height_px, px[2] / width_px,
          px[3] / height_px};
}

NormPoint center(const NormBBox& b) {
  return {(b.x1 + b.x2) / 2.0, (b.y1 + b.y2) / 2.0};
}

bool point_in_bbox(const NormPoint& p, const NormBBox& b) {
  return b.x1 <= p.x && p.x <= b.x2 && b.y1 <= p.y && p.y <= b.y2;
}

}  // namespace forge
