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

#include "stereosynth/metrics.h"

#include <cmath>
#include <limits>
#include <string>

#include "stereosynth/error.h"
#include "stereosynth/kernels.h"
#include "stereosynth/warp.h"

namespace stereosynth {
namespace {

void check_same_size(const ImagePlane& a, const ImagePlane& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) throw Error(std::string(what) + ": image sizes differ");
}

// Gaussian-weighted local sums of `plane` at every full window position,
// separable: horizontal correlation then a weighted row accumulation.
std::vector<double> filter_valid(const std::vector<double>& plane, int width, int height, const std::vector<double>& taps) {
  const auto& k = kernels::active();
  const std::size_t win = taps.size();
  const std::size_t out_w = static_cast<std::size_t>(width) - win + 1;
  const std::size_t out_h = static_cast<std::size_t>(height) - win + 1;
  std::vector<double> horiz(out_w * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    k.correlate_row(plane.data() + static_cast<std::size_t>(y) * width, static_cast<std::size_t>(width), taps.data(),
                    win, horiz.data() + static_cast<std::size_t>(y) * out_w);
  }
  std::vector<double> out(out_w * out_h, 0.0);
  for (std::size_t r = 0; r < out_h; ++r) {
    double* dst = out.data() + r * out_w;
    for (std::size_t j = 0; j < win; ++j) k.accumulate_scaled(horiz.data() + (r + j) * out_w, taps[j], dst, out_w);
  }
  return out;
}

// Returns (sum of local SSIM, window count) over windows with no excluded pixel.
std::pair<double, std::size_t> ssim_sum(const ImagePlane& a, const ImagePlane& b, const MaskPlane* exclude,
                                        const SsimParams& params) {
  const int width = a.width();
  const int height = a.height();
  const int win = params.window;
  const std::vector<double> taps = gaussian_taps(win, params.sigma);
  const std::vector<double> la = luma(a);
  const std::vector<double> lb = luma(b);
  std::vector<double> aa(la.size()), bb(la.size()), ab(la.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    aa[i] = la[i] * la[i];
    bb[i] = lb[i] * lb[i];
    ab[i] = la[i] * lb[i];
  }
  const auto mu_a = filter_valid(la, width, height, taps);
  const auto mu_b = filter_valid(lb, width, height, taps);
  const auto e_aa = filter_valid(aa, width, height, taps);
  const auto e_bb = filter_valid(bb, width, height, taps);
  const auto e_ab = filter_valid(ab, width, height, taps);

  const int out_w = width - win + 1;
  const int out_h = height - win + 1;
  // Summed-area table of excluded pixels for the per-window test.
  std::vector<std::size_t> integral;
  if (exclude != nullptr) {
    integral.assign(static_cast<std::size_t>(width + 1) * (height + 1), 0);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        integral[(y + 1) * (width + 1) + x + 1] = exclude->at(x, y) + integral[y * (width + 1) + x + 1] +
                                                  integral[(y + 1) * (width + 1) + x] - integral[y * (width + 1) + x];
      }
    }
  }
  auto excluded_in = [&](int x0, int y0) {
    if (integral.empty()) return false;
    const int x1 = x0 + win;
    const int y1 = y0 + win;
    return integral[y1 * (width + 1) + x1] - integral[y0 * (width + 1) + x1] - integral[y1 * (width + 1) + x0] +
               integral[y0 * (width + 1) + x0] !=
           0;
  };

  double sum = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      if (excluded_in(x, y)) continue;
      const std::size_t i = static_cast<std::size_t>(y) * out_w + x;
      const double ma = mu_a[i];
      const double mb = mu_b[i];
      const double va = e_aa[i] - ma * ma;
      const double vb = e_bb[i] - mb * mb;
      const double cov = e_ab[i] - ma * mb;
      sum += ((2.0 * ma * mb + params.c1) * (2.0 * cov + params.c2)) /
             ((ma * ma + mb * mb + params.c1) * (va + vb + params.c2));
      ++count;
    }
  }
  return {sum, count};
}

std::vector<std::uint8_t> keep_bytes(const MaskPlane& exclude) {
  std::vector<std::uint8_t> keep(exclude.bits().size() * 3);
  for (std::size_t i = 0; i < exclude.bits().size(); ++i) {
    const std::uint8_t k = exclude.bits()[i] ? 0 : 1;
    keep[3 * i] = keep[3 * i + 1] = keep[3 * i + 2] = k;
  }
  return keep;
}

}  // namespace

DisparityErrors disparity_errors(const DisparityMap& pred, const DisparityMap& gt) {
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw Error("disparity_errors: prediction and ground truth dimensions differ");
  }
  kernels::ErrorStats stats;
  kernels::active().error_stats(pred.values().data(), gt.values().data(), gt.valid().data(), gt.pixel_count(), &stats);
  if (stats.valid == 0) throw Error("disparity_errors: ground truth has no valid pixels");
  const double n = static_cast<double>(stats.valid);
  DisparityErrors out;
  out.valid_count = stats.valid;
  out.epe = stats.abs_error_sum / n;
  out.gt2px = 100.0 * static_cast<double>(stats.over_2px) / n;
  out.gt3px = 100.0 * static_cast<double>(stats.over_3px) / n;
  out.d1 = 100.0 * static_cast<double>(stats.d1_outliers) / n;
  return out;
}

std::vector<double> luma(const ImagePlane& image) {
  std::vector<double> out(image.pixel_count());
  const auto d = image.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = 0.299 * d[3 * i] + 0.587 * d[3 * i + 1] + 0.114 * d[3 * i + 2];
  }
  return out;
}

std::vector<double> gaussian_taps(int window, double sigma) {
  std::vector<double> taps(static_cast<std::size_t>(window));
  const double center = (window - 1) / 2.0;
  double total = 0.0;
  for (int i = 0; i < window; ++i) {
    const double d = i - center;
    taps[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    total += taps[i];
  }
  for (double& t : taps) t /= total;
  return taps;
}

double ssim(const ImagePlane& a, const ImagePlane& b, const SsimParams& params) {
  check_same_size(a, b, "ssim");
  if (a.width() < params.window || a.height() < params.window) throw Error("ssim: image smaller than window");
  const auto [sum, count] = ssim_sum(a, b, nullptr, params);
  return sum / static_cast<double>(count);
}

std::optional<double> masked_ssim(const ImagePlane& a, const ImagePlane& b, const MaskPlane& exclude,
                                  const SsimParams& params) {
  check_same_size(a, b, "masked_ssim");
  if (exclude.width() != a.width() || exclude.height() != a.height()) throw Error("masked_ssim: mask size differs");
  if (a.width() < params.window || a.height() < params.window) return std::nullopt;
  const auto [sum, count] = ssim_sum(a, b, &exclude, params);
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

double masked_psnr(const ImagePlane& a, const ImagePlane& b, const MaskPlane& exclude) {
  check_same_size(a, b, "psnr");
  const std::size_t kept = a.pixel_count() - exclude.count();
  if (kept == 0) throw Error("psnr: every pixel is excluded");
  const auto keep = keep_bytes(exclude);
  const std::uint64_t sq = kernels::active().masked_sq_diff_u8(a.data().data(), b.data().data(), keep.data(), keep.size());
  if (sq == 0) return std::numeric_limits<double>::infinity();
  const double mse = static_cast<double>(sq) / static_cast<double>(kept * 3);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double psnr(const ImagePlane& a, const ImagePlane& b) { return masked_psnr(a, b, MaskPlane::zeros(a.width(), a.height())); }

WarpConsistency warp_consistency(const ImagePlane& left, const ImagePlane& right, const DisparityMap& pred) {
  check_same_size(left, right, "warp_consistency");
  const WarpResult warped = warp_right_from_prediction(left, pred);
  const std::size_t holes = warped.hole_mask.count();
  if (holes == left.pixel_count()) throw Error("warp_consistency: every warped pixel is a hole");
  WarpConsistency out;
  out.evaluated_pixel_count = left.pixel_count() - holes;
  out.psnr = masked_psnr(warped.right_image, right, warped.hole_mask);
  out.ssim = masked_ssim(warped.right_image, right, warped.hole_mask);
  return out;
}

MetricsReport evaluate_pair(const DisparityMap& pred, const DisparityMap& gt, const ImagePlane* left,
                            const ImagePlane* right) {
  const DisparityErrors errors = disparity_errors(pred, gt);
  MetricsReport report;
  report.epe = errors.epe;
  report.d1 = errors.d1;
  report.gt2px = errors.gt2px;
  report.valid_count = errors.valid_count;
  if (left != nullptr && right != nullptr) {
    const WarpConsistency wc = warp_consistency(*left, *right, pred);
    report.psnr = wc.psnr;
    report.ssim = wc.ssim;
    report.evaluated_pixel_count = wc.evaluated_pixel_count;
  }
  return report;
}

}  // namespace stereosynth
