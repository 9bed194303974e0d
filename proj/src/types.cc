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

#include "stereosynth/types.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "stereosynth/error.h"

namespace stereosynth {
namespace {

void check_dims(int width, int height, const char* what) {
  if (width < 1 || height < 1) {
    throw Error(std::string(what) + ": dimensions must be at least 1x1, got " + std::to_string(width) + "x" +
                std::to_string(height));
  }
}

std::size_t area(int width, int height) { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }

}  // namespace

ImagePlane::ImagePlane(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  check_dims(width, height, "ImagePlane");
  if (data_.size() != area(width, height) * 3) throw Error("ImagePlane: data length does not match width*height*3");
}

ImagePlane ImagePlane::filled(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  check_dims(width, height, "ImagePlane");
  std::vector<std::uint8_t> data(area(width, height) * 3);
  for (std::size_t i = 0; i < data.size(); i += 3) {
    data[i] = r;
    data[i + 1] = g;
    data[i + 2] = b;
  }
  return ImagePlane(width, height, std::move(data));
}

RelativeDepthMap::RelativeDepthMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {}

RelativeDepthMap RelativeDepthMap::from_raw(int width, int height, std::span<const double> values) {
  check_dims(width, height, "RelativeDepthMap");
  if (values.size() != area(width, height)) throw Error("RelativeDepthMap: value count does not match dimensions");
  for (double v : values) {
    if (!std::isfinite(v)) throw Error("RelativeDepthMap: non-finite value in input");
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<double> out(values.size(), 0.0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::clamp((values[i] - min) / range, 0.0, 1.0);
  }
  return RelativeDepthMap(width, height, std::move(out));
}

RelativeDepthMap RelativeDepthMap::from_normalized(int width, int height, std::vector<double> values) {
  check_dims(width, height, "RelativeDepthMap");
  if (values.size() != area(width, height)) throw Error("RelativeDepthMap: value count does not match dimensions");
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error("RelativeDepthMap: value outside [0,1]");
  }
  return RelativeDepthMap(width, height, std::move(values));
}

RelativeDepthMap RelativeDepthMap::inverted() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return 1.0 - v; });
  return RelativeDepthMap(width_, height_, std::move(out));
}

DisparityMap::DisparityMap(int width, int height, std::vector<double> values, std::vector<std::uint8_t> valid)
    : width_(width), height_(height), values_(std::move(values)), valid_(std::move(valid)) {
  check_dims(width, height, "DisparityMap");
  if (values_.size() != area(width, height) || valid_.size() != values_.size()) {
    throw Error("DisparityMap: plane sizes do not match dimensions");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (valid_[i]) {
      valid_[i] = 1;
      if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
        throw Error("DisparityMap: valid pixel " + std::to_string(i) + " has negative or non-finite disparity");
      }
    } else {
      values_[i] = 0.0;
    }
  }
}

DisparityMap DisparityMap::dense(int width, int height, std::vector<double> values) {
  std::vector<std::uint8_t> valid(values.size(), 1);
  return DisparityMap(width, height, std::move(values), std::move(valid));
}

std::size_t DisparityMap::valid_count() const {
  return static_cast<std::size_t>(std::count(valid_.begin(), valid_.end(), std::uint8_t{1}));
}

MaskPlane::MaskPlane(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  check_dims(width, height, "MaskPlane");
  if (bits_.size() != area(width, height)) throw Error("MaskPlane: bit count does not match dimensions");
  for (auto& b : bits_) b = b ? 1 : 0;
}

MaskPlane MaskPlane::zeros(int width, int height) {
  check_dims(width, height, "MaskPlane");
  return MaskPlane(width, height, std::vector<std::uint8_t>(area(width, height), 0));
}

std::size_t MaskPlane::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool MaskPlane::is_subset_of(const MaskPlane& other) const {
  if (other.width_ != width_ || other.height_ != height_) return false;
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] && !other.bits_[i]) return false;
  }
  return true;
}

void ScaleConfig::validate(int image_width) const {
  if (!(d_min > 0.0)) throw ConfigError("scale config: d_min must be > 0");
  if (!(d_min <= d_max)) throw ConfigError("scale config: d_min must not exceed d_max");
  if (!(d_max < static_cast<double>(image_width))) {
    throw ConfigError("scale config: d_max (" + std::to_string(d_max) + ") must be smaller than the image width (" +
                      std::to_string(image_width) + ")");
  }
}

}  // namespace stereosynth
