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

#include <vector>

#include "stereosynth/types.h"
#include "stereosynth/warp.h"

namespace stereosynth {

struct EdgeConfig {
  double tau = 3.0;     // disparity drop (px) between horizontal neighbours that counts as an edge
  int strip_width = 2;  // background pixels co-warped with each edge pixel

  void validate() const;
};

struct EAWarpPlan {
  MaskPlane edge_mask;
  std::vector<StripSource> strip_sources;  // row-major order, one per scheduled background pixel
  MaskPlane inpaint_mask;                  // plain-warp holes minus targets filled by strips
};

struct EAWarpOutput {
  WarpResult warp;
  EAWarpPlan plan;
};

// M(x,y) = disp(x,y) - disp(x+1,y) > tau; the last column is always 0. Only
// foreground-on-the-left transitions open holes under x_r = x_l - D.
MaskPlane detect_edges(const DisparityMap& disparity, const EdgeConfig& cfg);

// Background pixels (x+1 .. x+w) right of each edge pixel, each borrowing the
// disparity of the nearest edge pixel on its left. Truncated at the border.
std::vector<StripSource> strip_sources_for(const DisparityMap& disparity, const MaskPlane& edges, int strip_width);

EAWarpPlan plan_ea_warp(const ImagePlane& left, const DisparityMap& disparity, const EdgeConfig& cfg);

// Plain warp plus strip splats in one pass; plan.inpaint_mask == warp.hole_mask.
EAWarpOutput warp_with_ea(const ImagePlane& left, const DisparityMap& disparity, const EdgeConfig& cfg);

}  // namespace stereosynth
