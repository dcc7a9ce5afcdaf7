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
#ifndef FORGE_GEOMETRY_HPP_
#define FORGE_GEOMETRY_HPP_

#include <array>

namespace forge {

// Axis-aligned box in normalized image coordinates (fractions of image
// width/height). All internal coordinates are normalized; pixels exist only
// at I/O boundaries. Raw metadata may carry out-of-range boxes, so
// construction never throws; validity is checked where it matters.
struct NormBBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  // True iff 0 <= x1 <= x2 <= 1 and 0 <= y1 <= y2 <= 1.
  bool valid() const;
  // Zero width or zero height. Degenerate boxes are storable but are
  // rejected by sample generation and the invalid-bbox denoise rule.
  bool degenerate() const;
  double area() const { return (x2 - x1) * (y2 - y1); }

  friend bool operator==(const NormBBox&, const NormBBox&) = default;
};

// A point in normalized image coordinates.
struct NormPoint {
  double x = 0.0;
  double y = 0.0;

  bool valid() const;

  friend bool operator==(const NormPoint&, const NormPoint&) = default;
};

// [x1, y1, x2, y2] in pixels.
using PixelBox = std::array<double, 4>;

// Scales a valid normalized box to pixel coordinates.
// Throws validation_error on an invalid box or non-positive dimensions.
PixelBox to_pixel(const NormBBox& b, int width_px, int height_px);

// Inverse of to_pixel. Throws validation_error on non-positive dimensions.
NormBBox from_pixel(const PixelBox& px, int width_px, int height_px);

// Geometric center of a valid box; always lies inside or on the box.
NormPoint center(const NormBBox& b);

// Boundary-inclusive containment test.
bool point_in_bbox(const NormPoint& p, const NormBBox& b);

}  // namespace forge

#endif  // FORGE_GEOMETRY_HPP_
