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

#include "stereosynth/warp.h"

#include <limits>
#include <vector>

#include "stereosynth/error.h"

namespace stereosynth {
namespace {

constexpr int kEmpty = -1;

struct RowSlot {
  double disparity = -std::numeric_limits<double>::infinity();
  int source_x = kEmpty;
};

}  // namespace

WarpResult forward_splat(const ImagePlane& left, const DisparityMap& disparity, std::span<const StripSource> strips) {
  const int width = left.width();
  const int height = left.height();
  if (disparity.width() != width || disparity.height() != height) {
    throw Error("warp: image is " + std::to_string(width) + "x" + std::to_string(height) + " but disparity is " +
                std::to_string(disparity.width()) + "x" + std::to_string(disparity.height()));
  }

  // Bucket strips per row so every row is independent.
  std::vector<std::vector<StripSource>> strips_by_row(static_cast<std::size_t>(height));
  for (const StripSource& s : strips) {
    if (s.y < 0 || s.y >= height || s.x < 0 || s.x >= width) throw Error("warp: strip source outside the image");
    if (!(s.disparity >= 0.0) || !std::isfinite(s.disparity)) throw Error("warp: strip disparity must be >= 0");
    strips_by_row[s.y].push_back(s);
  }

  const std::size_t n = left.pixel_count();
  std::vector<std::uint8_t> rgb(n * 3, 0);
  std::vector<std::uint8_t> holes(n, 1);
  std::vector<double> zvalues(n, 0.0);
  std::vector<std::uint8_t> zvalid(n, 0);
  SplatCounts genuine;
  SplatCounts strip_counts;

  std::vector<RowSlot> slots(static_cast<std::size_t>(width));
  std::vector<RowSlot> strip_slots(static_cast<std::size_t>(width));
  for (int y = 0; y < height; ++y) {
    std::fill(slots.begin(), slots.end(), RowSlot{});
    std::fill(strip_slots.begin(), strip_slots.end(), RowSlot{});

    // Ascending x: a later source replaces only on strictly larger disparity,
    // which realises the smaller-x tie break.
    for (int x = 0; x < width; ++x) {
      const double d = disparity.at(x, y);
      const long t = splat_target(x, d);
      if (t < 0 || t >= width) {
        ++genuine.dropped_off_frame;
        continue;
      }
      RowSlot& slot = slots[t];
      if (slot.source_x == kEmpty) {
        slot = {d, x};
      } else {
        ++genuine.lost_collision;
        if (d > slot.disparity) slot = {d, x};
      }
    }

    for (const StripSource& s : strips_by_row[y]) {
      const long t = splat_target(s.x, s.disparity);
      if (t < 0 || t >= width) {
        ++strip_counts.dropped_off_frame;
        continue;
      }
      if (slots[t].source_x != kEmpty) {
        ++strip_counts.lost_collision;
        continue;
      }
      RowSlot& slot = strip_slots[t];
      if (slot.source_x == kEmpty) {
        slot = {s.disparity, s.x};
      } else {
        ++strip_counts.lost_collision;
        if (s.disparity > slot.disparity || (s.disparity == slot.disparity && s.x < slot.source_x)) {
          slot = {s.disparity, s.x};
        }
      }
    }

    const auto src_row = left.row(y);
    for (int t = 0; t < width; ++t) {
      const RowSlot& slot = slots[t].source_x != kEmpty ? slots[t] : strip_slots[t];
      if (slot.source_x == kEmpty) continue;
      if (&slot == &slots[t]) {
        ++genuine.placed;
      } else {
        ++strip_counts.placed;
      }
      const std::size_t i = static_cast<std::size_t>(y) * width + t;
      holes[i] = 0;
      zvalues[i] = slot.disparity;
      zvalid[i] = 1;
      for (int c = 0; c < 3; ++c) rgb[i * 3 + c] = src_row[static_cast<std::size_t>(slot.source_x) * 3 + c];
    }
  }

  return WarpResult{
      ImagePlane(width, height, std::move(rgb)),
      MaskPlane(width, height, std::move(holes)),
      DisparityMap(width, height, std::move(zvalues), std::move(zvalid)),
      genuine,
      strip_counts,
  };
}

WarpResult warp_left_to_right(const ImagePlane& left, const DisparityMap& disparity) {
  return forward_splat(left, disparity, {});
}

WarpResult warp_right_from_prediction(const ImagePlane& left, const DisparityMap& prediction) {
  return warp_left_to_right(left, prediction);
}

}  // namespace stereosynth
