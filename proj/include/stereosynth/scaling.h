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

#include <cstdint>

#include "stereosynth/types.h"

namespace stereosynth {

// f ~ U(d_min, d_max), a pure function of (cfg.rng_seed, draw_index).
double sample_scale(const ScaleConfig& cfg, std::uint64_t draw_index);

// D' = f * D_mono; every output pixel is valid. Throws for f <= 0.
DisparityMap scale_to_pixels(const RelativeDepthMap& depth, double factor);

}  // namespace stereosynth
