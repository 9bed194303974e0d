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

#include "stereosynth/edge_aware.h"

#include <cmath>
#include <string>

#include "stereosynth/error.h"
#include "stereosynth/kernels.h"

namespace stereosynth {

void EdgeConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("edge config: tau must be > 0");
  if (strip_width < 1) throw ConfigError("edge config: strip width must be >= 1");
}

MaskPlane detect_edges(const DisparityMap& disparity, const EdgeConfig& cfg) {
  cfg.validate();
  if (!disparity.all_valid()) throw Error("detect_edges: disparity map has invalid pixels");
  const int width = disparity.width();
  std::vector<std::uint8_t> bits(disparity.pixel_count());
  const auto& k = kernels::active();
  for (int y = 0; y < disparity.height(); ++y) {
    const std::size_t offset = static_cast<std::size_t>(y) * width;
    k.edge_row(disparity.values().data() + offset, static_cast<std::size_t>(width), cfg.tau, bits.data() + offset);
  }
  return MaskPlane(width, disparity.height(), std::move(bits));
}

std::vector<StripSource> strip_sources_for(const DisparityMap& disparity, const MaskPlane& edges, int strip_width) {
  std::vector<StripSource> out;
  const int width = disparity.width();
  for (int y = 0; y < disparity.height(); ++y) {
    int last_edge = -1;
    for (int x = 0; x < width; ++x) {
      if (last_edge >= 0 && x - last_edge <= strip_width) {
        out.push_back({x, y, disparity.at(last_edge, y)});
      }
      if (edges.at(x, y)) last_edge = x;
    }
  }
  return out;
}

EAWarpPlan plan_ea_warp(const ImagePlane& left, const DisparityMap& disparity, const EdgeConfig& cfg) {
  return warp_with_ea(left, disparity, cfg).plan;
}

EAWarpOutput warp_with_ea(const ImagePlane& left, const DisparityMap& disparity, const EdgeConfig& cfg) {
  if (left.width() != disparity.width() || left.height() != disparity.height()) {
    throw Error("warp_with_ea: image and disparity dimensions differ");
  }
  MaskPlane edges = detect_edges(disparity, cfg);
  std::vector<StripSource> strips = strip_sources_for(disparity, edges, cfg.strip_width);
  WarpResult warp = forward_splat(left, disparity, strips);
  MaskPlane inpaint = warp.hole_mask;
  return EAWarpOutput{std::move(warp), EAWarpPlan{std::move(edges), std::move(strips), std::move(inpaint)}};
}

}  // namespace stereosynth
