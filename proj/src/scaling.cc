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

#include "stereosynth/scaling.h"

#include <cmath>

#include "stereosynth/error.h"
#include "stereosynth/kernels.h"
#include "stereosynth/rng.h"

namespace stereosynth {

double sample_scale(const ScaleConfig& cfg, std::uint64_t draw_index) {
  if (!(cfg.d_min > 0.0) || !(cfg.d_min <= cfg.d_max)) throw ConfigError("scale config: need 0 < d_min <= d_max");
  if (cfg.d_min == cfg.d_max) return cfg.d_min;
  CounterRng rng(cfg.rng_seed, draw_index);
  const double f = cfg.d_min + rng.next_unit() * (cfg.d_max - cfg.d_min);
  return std::fmin(f, cfg.d_max);
}

DisparityMap scale_to_pixels(const RelativeDepthMap& depth, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw Error("scale_to_pixels: scale factor must be positive");
  const auto in = depth.values();
  std::vector<double> out(in.size());
  kernels::active().scale(in.data(), factor, out.data(), in.size());
  return DisparityMap::dense(depth.width(), depth.height(), std::move(out));
}

}  // namespace stereosynth
