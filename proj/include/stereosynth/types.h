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
#include <span>
#include <vector>

namespace stereosynth {

// H x W x 3 raster, row-major, interleaved 8-bit RGB.
class ImagePlane {
 public:
  ImagePlane(int width, int height, std::vector<std::uint8_t> data);
  static ImagePlane filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<const std::uint8_t> row(int y) const {
    return std::span(data_).subspan(static_cast<std::size_t>(y) * width_ * 3, static_cast<std::size_t>(width_) * 3);
  }
  std::uint8_t at(int x, int y, int c) const { return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }

  friend bool operator==(const ImagePlane&, const ImagePlane&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> data_;
};

// Monocular relative disparity in [0,1] (larger = nearer).
class RelativeDepthMap {
 public:
  // Min/max normalizes arbitrary finite values; a constant map becomes all zeros.
  static RelativeDepthMap from_raw(int width, int height, std::span<const double> values);
  // Takes values that already lie in [0,1] verbatim.
  static RelativeDepthMap from_normalized(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const double> values() const { return values_; }
  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * width_ + x]; }

  // d <- 1 - d, for maps supplied as depth rather than disparity.
  RelativeDepthMap inverted() const;

 private:
  RelativeDepthMap(int width, int height, std::vector<double> values);
  int width_;
  int height_;
  std::vector<double> values_;
};

// Pixel-unit disparity with a validity plane. Invalid pixels always hold 0.
class DisparityMap {
 public:
  // Negative or non-finite values at valid pixels are rejected; values at
  // invalid pixels are zeroed.
  DisparityMap(int width, int height, std::vector<double> values, std::vector<std::uint8_t> valid);
  static DisparityMap dense(int width, int height, std::vector<double> values);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<const std::uint8_t> valid() const { return valid_; }
  double at(int x, int y) const { return values_[index(x, y)]; }
  bool valid_at(int x, int y) const { return valid_[index(x, y)] != 0; }
  std::size_t valid_count() const;
  bool all_valid() const { return valid_count() == values_.size(); }

  friend bool operator==(const DisparityMap&, const DisparityMap&) = default;

 private:
  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }
  int width_;
  int height_;
  std::vector<double> values_;
  std::vector<std::uint8_t> valid_;
};

// Binary plane, one byte per pixel holding 0 or 1.
class MaskPlane {
 public:
  MaskPlane(int width, int height, std::vector<std::uint8_t> bits);
  static MaskPlane zeros(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  std::size_t count() const;
  bool is_subset_of(const MaskPlane& other) const;

  friend bool operator==(const MaskPlane&, const MaskPlane&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> bits_;
};

struct ScaleConfig {
  double d_min = 32.0;
  double d_max = 192.0;
  std::uint64_t rng_seed = 0;

  // Throws ConfigError unless 0 < d_min <= d_max < image_width.
  void validate(int image_width) const;
};

}  // namespace stereosynth
