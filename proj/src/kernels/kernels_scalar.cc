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

#include <cmath>

#include "stereosynth/kernels.h"

namespace stereosynth::kernels {
namespace {

void scale_scalar(const double* in, double factor, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * factor;
}

void edge_row_scalar(const double* d, std::size_t n, double tau, std::uint8_t* mask) {
  if (n == 0) return;
  for (std::size_t x = 0; x + 1 < n; ++x) mask[x] = (d[x] - d[x + 1]) > tau ? 1 : 0;
  mask[n - 1] = 0;
}

void error_stats_scalar(const double* pred, const double* gt, const std::uint8_t* valid, std::size_t n,
                        ErrorStats* stats) {
  for (std::size_t i = 0; i < n; ++i) {
    if (!valid[i]) continue;
    const double err = std::fabs(pred[i] - gt[i]);
    stats->abs_error_sum += err;
    stats->valid += 1;
    stats->over_2px += err > 2.0;
    stats->over_3px += err > 3.0;
    stats->d1_outliers += (err > 3.0) && (err > 0.05 * gt[i]);
  }
}

std::uint64_t masked_sq_diff_u8_scalar(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* keep,
                                       std::size_t n) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return sum;
}

void correlate_row_scalar(const double* in, std::size_t n, const double* taps, std::size_t k, double* out) {
  if (n < k) return;
  for (std::size_t i = 0; i + k <= n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += taps[j] * in[i + j];
    out[i] = acc;
  }
}

void accumulate_scaled_scalar(const double* in, double w, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] += w * in[i];
}

double smooth_l1_scalar(const double* pred, const double* gt, const std::uint8_t* valid, std::size_t n,
                        double inv_count, double* grad) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!valid[i]) {
      grad[i] = 0.0;
      continue;
    }
    const double e = pred[i] - gt[i];
    const double a = std::fabs(e);
    if (a < 1.0) {
      sum += 0.5 * e * e;
      grad[i] = e * inv_count;
    } else {
      sum += a - 0.5;
      grad[i] = (e > 0.0 ? 1.0 : -1.0) * inv_count;
    }
  }
  return sum;
}

constexpr KernelTable kScalar{
    "scalar",
    scale_scalar,
    edge_row_scalar,
    error_stats_scalar,
    masked_sq_diff_u8_scalar,
    correlate_row_scalar,
    accumulate_scaled_scalar,
    smooth_l1_scalar,
};

}  // namespace

const KernelTable& scalar() { return kScalar; }

}  // namespace stereosynth::kernels
