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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "stereosynth/kernels.h"

namespace stereosynth::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// Four mask bytes -> all-ones / all-zeros 64-bit lanes.
inline __m256d load_mask4(const std::uint8_t* p) {
  std::int32_t bytes;
  std::memcpy(&bytes, p, 4);
  const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(bytes));
  return _mm256_castsi256_pd(_mm256_cmpgt_epi64(wide, _mm256_setzero_si256()));
}

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

inline unsigned popcount4(__m256d m) { return static_cast<unsigned>(__builtin_popcount(_mm256_movemask_pd(m))); }

void scale_avx2(const double* in, double factor, double* out, std::size_t n) {
  const __m256d f = _mm256_set1_pd(factor);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(in + i), f));
  for (; i < n; ++i) out[i] = in[i] * factor;
}

void edge_row_avx2(const double* d, std::size_t n, double tau, std::uint8_t* mask) {
  if (n == 0) return;
  const __m256d t = _mm256_set1_pd(tau);
  std::size_t x = 0;
  for (; x + 5 <= n; x += 4) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(d + x), _mm256_loadu_pd(d + x + 1));
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(diff, t, _CMP_GT_OQ));
    mask[x] = bits & 1;
    mask[x + 1] = (bits >> 1) & 1;
    mask[x + 2] = (bits >> 2) & 1;
    mask[x + 3] = (bits >> 3) & 1;
  }
  for (; x + 1 < n; ++x) mask[x] = (d[x] - d[x + 1]) > tau ? 1 : 0;
  mask[n - 1] = 0;
}

void error_stats_avx2(const double* pred, const double* gt, const std::uint8_t* valid, std::size_t n,
                      ErrorStats* stats) {
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d pct = _mm256_set1_pd(0.05);
  __m256d acc = _mm256_setzero_pd();
  std::uint64_t count = 0, over2 = 0, over3 = 0, d1 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = load_mask4(valid + i);
    const __m256d g = _mm256_loadu_pd(gt + i);
    const __m256d err = abs_pd(_mm256_sub_pd(_mm256_loadu_pd(pred + i), g));
    acc = _mm256_add_pd(acc, _mm256_and_pd(m, err));
    const __m256d gt3 = _mm256_and_pd(m, _mm256_cmp_pd(err, three, _CMP_GT_OQ));
    count += popcount4(m);
    over2 += popcount4(_mm256_and_pd(m, _mm256_cmp_pd(err, two, _CMP_GT_OQ)));
    over3 += popcount4(gt3);
    d1 += popcount4(_mm256_and_pd(gt3, _mm256_cmp_pd(err, _mm256_mul_pd(pct, g), _CMP_GT_OQ)));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    if (!valid[i]) continue;
    const double err = std::fabs(pred[i] - gt[i]);
    sum += err;
    count += 1;
    over2 += err > 2.0;
    over3 += err > 3.0;
    d1 += (err > 3.0) && (err > 0.05 * gt[i]);
  }
  stats->abs_error_sum += sum;
  stats->valid += count;
  stats->over_2px += over2;
  stats->over_3px += over3;
  stats->d1_outliers += d1;
}

std::uint64_t masked_sq_diff_u8_avx2(const std::uint8_t* a, const std::uint8_t* b, const std::uint8_t* keep,
                                     std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc64 = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i k = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(keep + i));
    const __m256i drop = _mm256_cmpeq_epi8(k, zero);
    const __m256i va = _mm256_andnot_si256(drop, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i)));
    const __m256i vb = _mm256_andnot_si256(drop, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i)));
    const __m256i dlo = _mm256_sub_epi16(_mm256_unpacklo_epi8(va, zero), _mm256_unpacklo_epi8(vb, zero));
    const __m256i dhi = _mm256_sub_epi16(_mm256_unpackhi_epi8(va, zero), _mm256_unpackhi_epi8(vb, zero));
    // Each 32-bit lane holds at most 2 * 255^2, so the pair sum fits easily.
    const __m256i sq = _mm256_add_epi32(_mm256_madd_epi16(dlo, dlo), _mm256_madd_epi16(dhi, dhi));
    acc64 = _mm256_add_epi64(acc64, _mm256_unpacklo_epi32(sq, zero));
    acc64 = _mm256_add_epi64(acc64, _mm256_unpackhi_epi32(sq, zero));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc64);
  std::uint64_t sum = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    if (!keep[i]) continue;
    const int d = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    sum += static_cast<std::uint64_t>(d * d);
  }
  return sum;
}

// Same accumulation order as the scalar loop (j ascending, mul then add), so
// results are bit-identical.
void correlate_row_avx2(const double* in, std::size_t n, const double* taps, std::size_t k, double* out) {
  if (n < k) return;
  const std::size_t outputs = n - k + 1;
  std::size_t i = 0;
  for (; i + 4 <= outputs; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < k; ++j) {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(taps[j]), _mm256_loadu_pd(in + i + j)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < outputs; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += taps[j] * in[i + j];
    out[i] = acc;
  }
}

void accumulate_scaled_avx2(const double* in, double w, double* out, std::size_t n) {
  const __m256d vw = _mm256_set1_pd(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(out + i), _mm256_mul_pd(vw, _mm256_loadu_pd(in + i))));
  }
  for (; i < n; ++i) out[i] += w * in[i];
}

double smooth_l1_avx2(const double* pred, const double* gt, const std::uint8_t* valid, std::size_t n,
                      double inv_count, double* grad) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d neg_one = _mm256_set1_pd(-1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d inv = _mm256_set1_pd(inv_count);
  __m256d acc = zero;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d m = load_mask4(valid + i);
    const __m256d e = _mm256_sub_pd(_mm256_loadu_pd(pred + i), _mm256_loadu_pd(gt + i));
    const __m256d a = abs_pd(e);
    const __m256d quad_zone = _mm256_cmp_pd(a, one, _CMP_LT_OQ);
    const __m256d quad = _mm256_mul_pd(_mm256_mul_pd(half, e), e);
    const __m256d lin = _mm256_sub_pd(a, half);
    const __m256d term = _mm256_blendv_pd(lin, quad, quad_zone);
    acc = _mm256_add_pd(acc, _mm256_and_pd(m, term));
    const __m256d sign = _mm256_blendv_pd(neg_one, one, _mm256_cmp_pd(e, zero, _CMP_GT_OQ));
    const __m256d g = _mm256_mul_pd(_mm256_blendv_pd(sign, e, quad_zone), inv);
    _mm256_storeu_pd(grad + i, _mm256_and_pd(m, g));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
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

constexpr KernelTable kAvx2{
    "avx2",
    scale_avx2,
    edge_row_avx2,
    error_stats_avx2,
    masked_sq_diff_u8_avx2,
    correlate_row_avx2,
    accumulate_scaled_avx2,
    smooth_l1_avx2,
};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace stereosynth::kernels
