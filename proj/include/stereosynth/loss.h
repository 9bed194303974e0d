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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "stereosynth/types.h"

namespace stereosynth {

enum class DistillVariant { kl, l2, grad, off };

std::string_view to_string(DistillVariant variant);
std::optional<DistillVariant> parse_distill_variant(std::string_view name);

struct DistillConfig {
  double alpha = 1.0;
  std::size_t sample_count = 4096;
  std::uint64_t rng_seed = 0;
  double epsilon = 1e-6;  // probability floor, must stay below 1 / sample_count
  DistillVariant variant = DistillVariant::kl;

  void validate() const;
};

struct PixelCoord {
  int x = 0;
  int y = 0;
  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

// A scalar loss and its gradient with respect to every prediction pixel
// (row-major, same size as the prediction).
struct LossValue {
  double value = 0.0;
  std::vector<double> grad;
};

struct LossReport {
  double total = 0.0;
  double sparse_term = 0.0;
  double distill_term = 0.0;
  int width = 0;
  int height = 0;
  std::vector<double> grad_wrt_prediction;
  std::vector<PixelCoord> sampled_pixels;
};

// Mean smooth-L1 (Huber, delta 1) over GT-valid pixels.
LossValue sparse_loss(const DisparityMap& pred, const DisparityMap& gt);

// `count` distinct eligible pixels, uniform without replacement, fixed by `seed`.
std::vector<PixelCoord> sample_pixels(const MaskPlane& eligible, std::size_t count, std::uint64_t seed);

// KL(P || Q) where P and Q are the sampled pred and mono values normalized to
// distributions with an epsilon floor:
//   p_i = (v_i + eps * S / N) / (S + eps * S),  S = sum of the sampled values.
// Invariant to any positive rescaling of either map.
LossValue kl_distill_loss(const DisparityMap& pred, const DisparityMap& mono, std::span<const PixelCoord> pixels,
                          double epsilon);

// Mean squared difference of raw values over the sample.
LossValue l2_distill_loss(const DisparityMap& pred, const DisparityMap& mono, std::span<const PixelCoord> pixels);

// Mean squared difference of horizontal forward differences over sampled
// pixels whose right neighbour is valid in both maps. The gradient reaches
// those right neighbours too.
LossValue grad_distill_loss(const DisparityMap& pred, const DisparityMap& mono, std::span<const PixelCoord> pixels);

// L = L_sparse + alpha * L_distill. Pixels are sampled from those valid in both
// pred and mono; nothing is sampled for the `off` variant.
LossReport combined_loss(const DisparityMap& pred, const DisparityMap& gt, const DisparityMap& mono,
                         const DistillConfig& cfg);

}  // namespace stereosynth
