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
#include <string_view>

namespace stereosynth::kernels {

// Running totals for disparity error metrics over one contiguous span.
struct ErrorStats {
  double abs_error_sum = 0.0;
  std::uint64_t valid = 0;
  std::uint64_t over_2px = 0;
  std::uint64_t over_3px = 0;
  std::uint64_t d1_outliers = 0;  // |e| > 3 and |e| > 0.05 * gt
};

// One implementation of every data-parallel inner loop. The scalar table is
// the reference; vector tables must match it exactly for element-wise kernels
// and to rounding for the reductions (abs_error_sum, smooth_l1 loss sum).
struct KernelTable {
  std::string_view name;

  // out[i] = in[i] * factor
  void (*scale)(const double* in, double factor, double* out, std::size_t n);

  // mask[x] = (d[x] - d[x+1] > tau) for x < n-1; mask[n-1] = 0.
  void (*edge_row)(const double* d, std::size_t n, double tau, std::uint8_t* mask);

  // Accumulates into `stats` over indices with valid[i] != 0.
  void (*error_stats)(const double* pred, const double* gt, const std::uint8_t* valid, std::size_t n,
                      ErrorStats* stats);

  // Sum of (a[i]-b[i])^2 over i with keep[i] != 0. Exact (integer).
  std::uint64_t (*masked_sq_diff_u8)(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* keep,
                                     std::size_t n);

  // Valid-mode 1-D correlation: out[i] = sum_j taps[j] * in[i+j], i in [0, n-k].
  void (*correlate_row)(const double* in, std::size_t n, const double* taps, std::size_t k, double* out);

  // out[i] += w * in[i]  (separate multiply and add, no fusion)
  void (*accumulate_scaled)(const double* in, double w, double* out, std::size_t n);

  // Huber (delta = 1) over valid pixels. Writes grad[i] = d/d pred[i] of
  // inv_count * sum(huber(pred - gt)) for valid i, 0 elsewhere; returns the
  // unscaled sum of huber terms.
  double (*smooth_l1)(const double* pred, const double* gt, const std::uint8_t* valid, std::size_t n,
                      double inv_count, double* grad);
};

const KernelTable& scalar();
// nullptr when not compiled in or not supported by the running CPU.
const KernelTable* avx2();

// Best table for this CPU, chosen once. STEREOSYNTH_KERNELS=scalar forces the
// reference path.
const KernelTable& active();

}  // namespace stereosynth::kernels
