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
#include <optional>
#include <vector>

#include "stereosynth/types.h"

namespace stereosynth {

struct DisparityErrors {
  double epe = 0.0;    // mean |pred - gt|, px
  double d1 = 0.0;     // % with |e| > 3 and |e| > 5% of gt
  double gt2px = 0.0;  // % with |e| > 2
  double gt3px = 0.0;  // % with |e| > 3; d1 never exceeds it
  std::size_t valid_count = 0;
};

// Over GT-valid pixels. Throws when the GT has none.
DisparityErrors disparity_errors(const DisparityMap& pred, const DisparityMap& gt);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double c1 = (0.01 * 255) * (0.01 * 255);
  double c2 = (0.03 * 255) * (0.03 * 255);
};

// Rec.601 luma as doubles, row-major.
std::vector<double> luma(const ImagePlane& image);

// Normalized 1-D Gaussian; the 2-D window is its outer product.
std::vector<double> gaussian_taps(int window, double sigma);

// Mean local SSIM on luma over every full window position. Throws when the
// images are smaller than the window or differ in size.
double ssim(const ImagePlane& a, const ImagePlane& b, const SsimParams& params = {});

// As ssim(), skipping every window that touches a set pixel of `exclude`.
// nullopt when no window survives or the image is smaller than the window.
std::optional<double> masked_ssim(const ImagePlane& a, const ImagePlane& b, const MaskPlane& exclude,
                                  const SsimParams& params = {});

// 10 log10(255^2 / MSE) over all channels of pixels not set in `exclude`.
// +infinity for identical pixels. Throws when every pixel is excluded.
double masked_psnr(const ImagePlane& a, const ImagePlane& b, const MaskPlane& exclude);
double psnr(const ImagePlane& a, const ImagePlane& b);

struct WarpConsistency {
  double psnr = 0.0;
  std::optional<double> ssim;
  std::size_t evaluated_pixel_count = 0;
};

// Forward-warps `left` by `pred` and compares against `right` on non-hole pixels.
WarpConsistency warp_consistency(const ImagePlane& left, const ImagePlane& right, const DisparityMap& pred);

struct MetricsReport {
  double epe = 0.0;
  double d1 = 0.0;
  double gt2px = 0.0;
  std::size_t valid_count = 0;
  std::optional<double> psnr;
  std::optional<double> ssim;
  std::size_t evaluated_pixel_count = 0;
};

// Disparity errors always; warp consistency only when both views are given.
MetricsReport evaluate_pair(const DisparityMap& pred, const DisparityMap& gt, const ImagePlane* left,
                            const ImagePlane* right);

}  // namespace stereosynth
