// Copyright 2026 The stereosynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "stereosynth/types.h"

namespace stereosynth {

// Every source pixel ends in exactly one bucket.
struct SplatCounts {
  std::size_t placed = 0;
  std::size_t dropped_off_frame = 0;
  std::size_t lost_collision = 0;

  std::size_t total() const { return placed + dropped_off_frame + lost_collision; }
  friend bool operator==(const SplatCounts&, const SplatCounts&) = default;
};

struct WarpResult {
  ImagePlane right_image;  // holes are painted black; hole_mask is authoritative
  MaskPlane hole_mask;     // true where no source landed
  DisparityMap zbuffer;    // winning disparity, invalid exactly at holes
  SplatCounts genuine;     // one entry per left-image pixel
  SplatCounts strip;       // one entry per extra splat (zero for a plain warp)
};

// An extra splat of the left pixel (x, y) carrying a borrowed disparity. It can
// only fill a target that no genuine source reached.
struct StripSource {
  int x = 0;
  int y = 0;
  double disparity = 0.0;
  friend bool operator==(const StripSource&, const StripSource&) = default;
};

// Target column of a source at x with disparity d: round-half-up of x - d.
inline long splat_target(int x, double disparity) {
  return static_cast<long>(std::floor(static_cast<double>(x) - disparity + 0.5));
}

// Forward splat of every left pixel to (round(x - D), y). Collisions keep the
// larger disparity, ties keep the smaller source x. Disparities at invalid
// pixels are 0 by construction and are splatted as such.
WarpResult warp_left_to_right(const ImagePlane& left, const DisparityMap& disparity);

// Same operation, named for the evaluation path that warps with a predicted map.
WarpResult warp_right_from_prediction(const ImagePlane& left, const DisparityMap& prediction);

// Genuine splats plus `strips`. Strips compete only for targets left empty by
// genuine splats, with the same larger-disparity-then-smaller-x rule.
WarpResult forward_splat(const ImagePlane& left, const DisparityMap& disparity, std::span<const StripSource> strips);

}  // namespace stereosynth
