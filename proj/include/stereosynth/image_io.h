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

#include <filesystem>
#include <vector>

#include "stereosynth/types.h"

namespace stereosynth {

// 8-bit RGB/gray PNG or binary PPM (P6), sniffed by magic bytes. Gray is
// promoted to three identical channels.
ImagePlane read_image(const std::filesystem::path& path);
// PNG, or P6 when the extension is ".ppm".
void write_image(const ImagePlane& image, const std::filesystem::path& path);

// KITTI convention: single-channel 16-bit PNG, disparity = raw / 256, raw 0 = invalid.
DisparityMap read_disparity_kitti_png(const std::filesystem::path& path);
// raw = round(value * 256); throws when a valid value does not fit in 16 bits.
void write_disparity_kitti_png(const DisparityMap& disparity, const std::filesystem::path& path);

// Single-channel float plane in file row order already flipped to top-to-bottom.
struct FloatPlane {
  int width = 0;
  int height = 0;
  std::vector<float> values;
};

// "Pf" only. Endianness follows the sign of the scale line (negative = little).
FloatPlane read_pfm(const std::filesystem::path& path);
void write_pfm(const FloatPlane& plane, const std::filesystem::path& path, bool little_endian = true);

// Infinite samples mark invalid pixels (Middlebury convention); NaN is rejected.
DisparityMap read_pfm_disparity(const std::filesystem::path& path);
void write_pfm_disparity(const DisparityMap& disparity, const std::filesystem::path& path);

// Relative depth from PFM, or from an 8/16-bit grayscale PNG. Values are
// min/max normalized on load.
RelativeDepthMap read_relative_depth(const std::filesystem::path& path);

// Either KITTI 16-bit PNG or PFM, chosen by extension.
DisparityMap read_disparity(const std::filesystem::path& path);

// 8-bit grayscale PNG, 255 = set, 0 = clear.
void write_mask_png(const MaskPlane& mask, const std::filesystem::path& path);
// Any nonzero gray value counts as set.
MaskPlane read_mask_png(const std::filesystem::path& path);

}  // namespace stereosynth
