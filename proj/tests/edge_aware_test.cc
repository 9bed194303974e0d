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

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"
#include "stereosynth/edge_aware.h"
#include "stereosynth/error.h"

namespace stereosynth {
namespace {

std::vector<std::uint8_t> bits_of(const MaskPlane& m) { return {m.bits().begin(), m.bits().end()}; }

// Row image: foreground colour F on [fg_begin, fg_end), background B elsewhere.
ImagePlane two_tone(int width, int height, int fg_begin, int fg_end) {
  std::vector<std::uint8_t> data;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const bool fg = x >= fg_begin && x < fg_end;
      data.insert(data.end(), fg ? std::initializer_list<std::uint8_t>{220, 30, 30}
                                 : std::initializer_list<std::uint8_t>{20, 90, 200});
    }
  }
  return ImagePlane(width, height, std::move(data));
}

TEST(EdgeDetection, ConstantDisparityHasNoEdges) {
  const auto d = DisparityMap::dense(9, 4, std::vector<double>(36, 40.0));
  EXPECT_EQ(detect_edges(d, {}).count(), 0u);
}

TEST(EdgeDetection, SingleDrop) {
  const auto d = DisparityMap::dense(5, 1, {50, 50, 50, 10, 10});
  EXPECT_EQ(bits_of(detect_edges(d, {5.0, 2})), (std::vector<std::uint8_t>{0, 0, 1, 0, 0}));
}

TEST(EdgeDetection, RisingStepIsNotAnEdge) {
  const auto d = DisparityMap::dense(5, 1, {10, 10, 50, 50, 50});
  EXPECT_EQ(detect_edges(d, {5.0, 2}).count(), 0u);
}

TEST(EdgeDetection, ThresholdIsStrict) {
  const auto d = DisparityMap::dense(3, 1, {8, 5, 1.9});
  EXPECT_EQ(bits_of(detect_edges(d, {3.0, 2})), (std::vector<std::uint8_t>{0, 1, 0}));
}

TEST(EdgeDetection, MatchesOracleOnRandomMaps) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = testing::random_layered_disparity(16, 16, 30.0, rng);
    const double tau = 0.5 + trial * 0.3;
    EXPECT_EQ(bits_of(detect_edges(d, {tau, 2})), testing::edge_oracle(d, tau));
  }
}

TEST(EdgeDetection, TranslationEquivariant) {
  std::mt19937_64 rng(12);
  const int w = 20, h = 6;
  const auto d = testing::random_layered_disparity(w, h, 25.0, rng);
  const MaskPlane base = detect_edges(d, {});
  for (int k = 1; k < 6; ++k) {
    std::vector<double> v(d.pixel_count(), 7.0);
    for (int y = 0; y < h; ++y)
      for (int x = k; x < w; ++x) v[static_cast<std::size_t>(y) * w + x] = d.at(x - k, y);
    const MaskPlane shifted = detect_edges(DisparityMap::dense(w, h, v), {});
    for (int y = 0; y < h; ++y) {
      for (int x = k; x + 1 < w; ++x) EXPECT_EQ(shifted.at(x, y), base.at(x - k, y)) << k << " " << x;
    }
  }
}

TEST(EdgeDetection, RejectsInvalidPixelsAndBadConfig) {
  const DisparityMap sparse(3, 1, {1, 2, 3}, {1, 0, 1});
  EXPECT_THROW(detect_edges(sparse, {}), Error);
  EXPECT_THROW((EdgeConfig{-1.0, 2}).validate(), ConfigError);
  EXPECT_THROW((EdgeConfig{3.0, -1}).validate(), ConfigError);
  EXPECT_THROW((EdgeConfig{3.0, 0}).validate(), ConfigError);
}

TEST(StripSources, BorrowNearestEdgeAndTruncateAtBorder) {
  const auto d = DisparityMap::dense(7, 1, {0, 20, 9, 0, 0, 20, 0});
  const MaskPlane edges = detect_edges(d, {3.0, 2});
  EXPECT_EQ(bits_of(edges), (std::vector<std::uint8_t>{0, 1, 1, 0, 0, 1, 0}));
  const auto strips = strip_sources_for(d, edges, 2);
  // x=2 is an edge pixel and also the first strip pixel of the edge at x=1;
  // x=3,4 borrow from the nearer edge at x=2; x=6 is the last column.
  const std::vector<StripSource> expected{{2, 0, 20.0}, {3, 0, 9.0}, {4, 0, 9.0}, {6, 0, 20.0}};
  EXPECT_EQ(strips, expected);
}

TEST(EdgeAwareWarp, ForegroundAtLeftBorderDropsItsStrips) {
  const ImagePlane left = two_tone(8, 1, 0, 3);
  const auto d = DisparityMap::dense(8, 1, {6, 6, 6, 0, 0, 0, 0, 0});
  const EAWarpOutput out = warp_with_ea(left, d, {3.0, 2});
  EXPECT_EQ(bits_of(out.plan.edge_mask), (std::vector<std::uint8_t>{0, 0, 1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(out.plan.strip_sources, (std::vector<StripSource>{{3, 0, 6.0}, {4, 0, 6.0}}));
  EXPECT_EQ(out.warp.strip.dropped_off_frame, 2u);
  EXPECT_EQ(out.warp.strip.placed, 0u);
  EXPECT_EQ(bits_of(out.plan.inpaint_mask), (std::vector<std::uint8_t>{1, 1, 1, 0, 0, 0, 0, 0}));
}

TEST(EdgeAwareWarp, TwoToneSceneFillsWithBackgroundOnly) {
  const int w = 32;
  const ImagePlane left = two_tone(w, 3, 8, 16);
  std::vector<double> v;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < w; ++x) v.push_back(x >= 8 && x < 16 ? 8.0 : 2.0);
  const auto d = DisparityMap::dense(w, 3, v);

  const WarpResult plain = warp_left_to_right(left, d);
  const EAWarpOutput ea = warp_with_ea(left, d, {3.0, 2});
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < w; ++x) {
      const bool plain_hole = (x >= 8 && x <= 13) || x >= 30;
      const bool strip_fill = x == 8 || x == 9;
      EXPECT_EQ(plain.hole_mask.at(x, y), plain_hole) << x;
      EXPECT_EQ(ea.plan.inpaint_mask.at(x, y), plain_hole && !strip_fill) << x;
      if (strip_fill) {
        EXPECT_EQ(ea.warp.right_image.at(x, y, 0), 20);
        EXPECT_EQ(ea.warp.right_image.at(x, y, 2), 200);
        EXPECT_EQ(ea.warp.zbuffer.at(x, y), 8.0);
      }
      // Targets 0..7 are foreground in both warps.
      if (x < 8) {
        EXPECT_EQ(ea.warp.right_image.at(x, y, 0), 220);
      }
    }
  }
  EXPECT_EQ(ea.warp.hole_mask, ea.plan.inpaint_mask);
}

TEST(EdgeAwareWarp, MatchesOracleAndInvariantsOnRandomScenes) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> dim(2, 24);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = dim(rng), h = dim(rng);
    const EdgeConfig cfg{1.0 + trial % 5, 1 + trial % 4};
    const ImagePlane left = testing::random_image(w, h, rng);
    const auto d = testing::random_layered_disparity(w, h, 20.0, rng);
    const EAWarpOutput ea = warp_with_ea(left, d, cfg);
    const auto o = testing::warp_oracle(left, d, cfg.tau, cfg.strip_width);
    EXPECT_EQ(std::vector<std::uint8_t>(ea.warp.right_image.data().begin(), ea.warp.right_image.data().end()), o.rgb);
    EXPECT_EQ(bits_of(ea.warp.hole_mask), o.holes);

    const WarpResult plain = warp_left_to_right(left, d);
    EXPECT_TRUE(ea.plan.inpaint_mask.is_subset_of(plain.hole_mask));
    const std::size_t edges = ea.plan.edge_mask.count();
    EXPECT_LE(plain.hole_mask.count() - ea.plan.inpaint_mask.count(),
              edges * static_cast<std::size_t>(cfg.strip_width));
    EXPECT_EQ(ea.warp.strip.total(), ea.plan.strip_sources.size());
    EXPECT_EQ(ea.warp.genuine, plain.genuine);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (plain.hole_mask.at(x, y)) continue;
        for (int c = 0; c < 3; ++c) ASSERT_EQ(ea.warp.right_image.at(x, y, c), plain.right_image.at(x, y, c));
      }
    }
    const EAWarpPlan plan = plan_ea_warp(left, d, cfg);
    EXPECT_EQ(plan.inpaint_mask, ea.plan.inpaint_mask);
    EXPECT_EQ(plan.strip_sources, ea.plan.strip_sources);
  }
}

TEST(EdgeAwareWarp, RowsAreIndependent) {
  std::mt19937_64 rng(4);
  const ImagePlane left = testing::random_image(20, 6, rng);
  const auto d = testing::random_layered_disparity(20, 6, 15.0, rng);
  const EAWarpOutput whole = warp_with_ea(left, d, {});
  for (int y = 0; y < 6; ++y) {
    auto row_img = left.row(y);
    const ImagePlane one(20, 1, {row_img.begin(), row_img.end()});
    const auto vals = d.values().subspan(static_cast<std::size_t>(y) * 20, 20);
    const EAWarpOutput single = warp_with_ea(one, DisparityMap::dense(20, 1, {vals.begin(), vals.end()}), {});
    for (int x = 0; x < 20; ++x) {
      EXPECT_EQ(single.plan.inpaint_mask.at(x, 0), whole.plan.inpaint_mask.at(x, y));
      for (int c = 0; c < 3; ++c) EXPECT_EQ(single.warp.right_image.at(x, 0, c), whole.warp.right_image.at(x, y, c));
    }
  }
}

TEST(EdgeAwareWarp, ZeroDisparityIsIdentity) {
  std::mt19937_64 rng(6);
  const ImagePlane left = testing::random_image(12, 5, rng);
  const EAWarpOutput ea = warp_with_ea(left, DisparityMap::dense(12, 5, std::vector<double>(60, 0.0)), {});
  EXPECT_EQ(ea.warp.right_image, left);
  EXPECT_EQ(ea.plan.edge_mask.count(), 0u);
  EXPECT_EQ(ea.plan.inpaint_mask.count(), 0u);
}

}  // namespace
}  // namespace stereosynth
