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
#include "stereosynth/error.h"
#include "stereosynth/warp.h"

namespace stereosynth {
namespace {

// One-row image whose pixel x has colour (10 * (x + 1), x, 255 - x).
ImagePlane labelled_row(int width) {
  std::vector<std::uint8_t> data;
  for (int x = 0; x < width; ++x) {
    data.push_back(static_cast<std::uint8_t>(10 * (x + 1)));
    data.push_back(static_cast<std::uint8_t>(x));
    data.push_back(static_cast<std::uint8_t>(255 - x));
  }
  return ImagePlane(width, 1, std::move(data));
}

// Source column each target took its colour from, -1 for holes.
std::vector<int> source_columns(const WarpResult& r, const ImagePlane& left) {
  std::vector<int> out;
  for (int t = 0; t < r.right_image.width(); ++t) {
    if (r.hole_mask.at(t, 0)) {
      out.push_back(-1);
      continue;
    }
    int found = -2;
    for (int x = 0; x < left.width(); ++x) {
      if (left.at(x, 0, 0) == r.right_image.at(t, 0, 0)) found = x;
    }
    out.push_back(found);
  }
  return out;
}

void expect_matches_oracle(const ImagePlane& left, const DisparityMap& d) {
  const WarpResult r = warp_left_to_right(left, d);
  const testing::OracleWarp o = testing::warp_oracle(left, d, 1.0, 0);
  EXPECT_EQ(std::vector<std::uint8_t>(r.right_image.data().begin(), r.right_image.data().end()), o.rgb);
  EXPECT_EQ(std::vector<std::uint8_t>(r.hole_mask.bits().begin(), r.hole_mask.bits().end()), o.holes);
  EXPECT_EQ(std::vector<double>(r.zbuffer.values().begin(), r.zbuffer.values().end()), o.zbuffer);
}

TEST(Warp, ZeroDisparityIsIdentity) {
  std::mt19937_64 rng(1);
  const ImagePlane left = testing::random_image(13, 7, rng);
  const WarpResult r = warp_left_to_right(left, DisparityMap::dense(13, 7, std::vector<double>(91, 0.0)));
  EXPECT_EQ(r.right_image, left);
  EXPECT_EQ(r.hole_mask.count(), 0u);
  EXPECT_EQ(r.genuine.placed, 91u);
}

TEST(Warp, UniformShiftOfThree) {
  const ImagePlane left = labelled_row(10);
  const WarpResult r = warp_left_to_right(left, DisparityMap::dense(10, 1, std::vector<double>(10, 3.0)));
  EXPECT_EQ(source_columns(r, left), (std::vector<int>{3, 4, 5, 6, 7, 8, 9, -1, -1, -1}));
  EXPECT_EQ(r.genuine.dropped_off_frame, 3u);
}

// Values below were produced by testing::warp_oracle and checked by hand.
TEST(Warp, SixPixelRowMatchesSplatOracle) {
  const ImagePlane left = labelled_row(6);
  const DisparityMap d = DisparityMap::dense(6, 1, {4, 4, 0, 0, 0, 0});
  const WarpResult r = warp_left_to_right(left, d);
  EXPECT_EQ(source_columns(r, left), (std::vector<int>{-1, -1, 2, 3, 4, 5}));
  expect_matches_oracle(left, d);
}

TEST(Warp, CollisionKeepsLargerDisparity) {
  const ImagePlane left = labelled_row(6);
  const DisparityMap d = DisparityMap::dense(6, 1, {0, 0, 0, 2, 2, 2});
  const WarpResult r = warp_left_to_right(left, d);
  EXPECT_EQ(source_columns(r, left), (std::vector<int>{0, 3, 4, 5, -1, -1}));
  EXPECT_EQ(r.genuine.lost_collision, 2u);
  EXPECT_EQ(r.zbuffer.at(1, 0), 2.0);
  expect_matches_oracle(left, d);
}

TEST(Warp, RoundsHalfUp) {
  const ImagePlane left = labelled_row(4);
  // 3 - 2.5 = 0.5 -> 1;  1 - 0.5 = 0.5 -> 1 as well, but 2.5 > 0.5 wins.
  const DisparityMap d = DisparityMap::dense(4, 1, {0, 0.5, 9, 2.5});
  const WarpResult r = warp_left_to_right(left, d);
  EXPECT_EQ(source_columns(r, left), (std::vector<int>{0, 3, -1, -1}));
}

TEST(Warp, IntegerShiftOpensExactlyThatManyRightColumns) {
  std::mt19937_64 rng(3);
  for (int shift = 0; shift < 9; ++shift) {
    const ImagePlane left = testing::random_image(16, 5, rng);
    const WarpResult r = warp_left_to_right(left, DisparityMap::dense(16, 5, std::vector<double>(80, shift)));
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 16; ++x) {
        ASSERT_EQ(r.hole_mask.at(x, y), x >= 16 - shift);
        if (x < 16 - shift) {
          for (int c = 0; c < 3; ++c) ASSERT_EQ(r.right_image.at(x, y, c), left.at(x + shift, y, c));
        }
      }
    }
  }
}

TEST(Warp, RandomInstancesMatchOracleAndConserveSources) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(1, 24);
  for (int trial = 0; trial < 40; ++trial) {
    const int w = dim(rng), h = dim(rng);
    const ImagePlane left = testing::random_image(w, h, rng);
    const DisparityMap d = trial % 2 ? testing::random_disparity(w, h, 0.0, 16.0, rng)
                                     : testing::random_layered_disparity(w, h, 16.0, rng);
    expect_matches_oracle(left, d);
    const WarpResult r = warp_left_to_right(left, d);
    EXPECT_EQ(r.genuine.total(), static_cast<std::size_t>(w) * h);
    EXPECT_EQ(r.genuine.placed + r.hole_mask.count(), static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < r.hole_mask.bits().size(); ++i) {
      EXPECT_EQ(r.hole_mask.bits()[i] != 0, r.zbuffer.valid()[i] == 0);
    }
  }
}

TEST(Warp, NonHoleColoursComeFromTheSameRow) {
  std::mt19937_64 rng(8);
  const ImagePlane left = testing::random_image(20, 6, rng);
  const WarpResult r = warp_left_to_right(left, testing::random_disparity(20, 6, 0, 10, rng));
  for (int y = 0; y < 6; ++y) {
    for (int t = 0; t < 20; ++t) {
      if (r.hole_mask.at(t, y)) continue;
      bool found = false;
      for (int x = 0; x < 20 && !found; ++x) {
        found = left.at(x, y, 0) == r.right_image.at(t, y, 0) && left.at(x, y, 1) == r.right_image.at(t, y, 1) &&
                left.at(x, y, 2) == r.right_image.at(t, y, 2);
      }
      EXPECT_TRUE(found);
    }
  }
}

TEST(Warp, DeterministicAcrossCalls) {
  std::mt19937_64 rng(5);
  const ImagePlane left = testing::random_image(31, 9, rng);
  const DisparityMap d = testing::random_disparity(31, 9, 0, 12, rng);
  const WarpResult a = warp_left_to_right(left, d);
  const WarpResult b = warp_right_from_prediction(left, d);
  EXPECT_EQ(a.right_image, b.right_image);
  EXPECT_EQ(a.hole_mask, b.hole_mask);
  EXPECT_EQ(a.zbuffer, b.zbuffer);
  EXPECT_EQ(a.genuine, b.genuine);
}

TEST(Warp, DimensionMismatch) {
  EXPECT_THROW(warp_left_to_right(ImagePlane::filled(4, 4, 0, 0, 0), DisparityMap::dense(3, 4, std::vector<double>(12))),
               Error);
}

TEST(Warp, StripsOnlyFillGenuineHoles) {
  const ImagePlane left = labelled_row(6);
  const DisparityMap d = DisparityMap::dense(6, 1, {0, 0, 0, 2, 2, 2});
  // Strip from x=5 with disparity 1 would land on 4 (a hole); from x=2 with
  // disparity 1 it would land on 1, already taken by a genuine splat.
  const std::vector<StripSource> strips{{5, 0, 1.0}, {2, 0, 1.0}};
  const WarpResult r = forward_splat(left, d, strips);
  EXPECT_EQ(source_columns(r, left), (std::vector<int>{0, 3, 4, 5, 5, -1}));
  EXPECT_EQ(r.strip.placed, 1u);
  EXPECT_EQ(r.strip.lost_collision, 1u);
}

}  // namespace
}  // namespace stereosynth
