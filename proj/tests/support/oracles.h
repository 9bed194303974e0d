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

// Independent reference implementations used only by tests. None of these
// call into the library's warp, edge, SSIM or loss code paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "stereosynth/types.h"

namespace stereosynth::testing {

inline ImagePlane random_image(int w, int h, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  for (auto& b : data) b = static_cast<std::uint8_t>(byte(rng));
  return ImagePlane(w, h, std::move(data));
}

inline DisparityMap random_disparity(int w, int h, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = u(rng);
  return DisparityMap::dense(w, h, std::move(v));
}

// Piecewise-constant rows (random step heights and lengths): produces many
// edges of both signs, unlike i.i.d. noise.
inline DisparityMap random_layered_disparity(int w, int h, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> level(0.0, hi);
  std::uniform_int_distribution<int> run(1, 8);
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      const double d = level(rng);
      for (int k = run(rng); k > 0 && x < w; --k, ++x) v[static_cast<std::size_t>(y) * w + x] = d;
    }
  }
  return DisparityMap::dense(w, h, std::move(v));
}

// Forward-difference threshold, straight from the definition.
inline std::vector<std::uint8_t> edge_oracle(const DisparityMap& d, double tau) {
  std::vector<std::uint8_t> m(d.pixel_count(), 0);
  for (int y = 0; y < d.height(); ++y) {
    for (int x = 0; x + 1 < d.width(); ++x) {
      const double gradient = d.at(x, y) - d.at(x + 1, y);
      m[static_cast<std::size_t>(y) * d.width() + x] = gradient > tau;
    }
  }
  return m;
}

struct OracleWarp {
  std::vector<std::uint8_t> rgb;
  std::vector<std::uint8_t> holes;
  std::vector<double> zbuffer;
};

// O(W^2 H) per-target scan. A source at x with disparity d reaches target t
// iff t <= x - d + 0.5 < t + 1. Genuine sources always beat strip sources;
// within a class the larger disparity wins, then the smaller source x. Strip
// sources: the `strip_width` pixels right of each edge pixel, borrowing the
// nearest edge disparity to their left (pass strip_width = 0 for a plain warp).
inline OracleWarp warp_oracle(const ImagePlane& left, const DisparityMap& d, double tau, int strip_width) {
  const int w = left.width();
  const int h = left.height();
  OracleWarp out{std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3, 0),
                 std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h, 1),
                 std::vector<double>(static_cast<std::size_t>(w) * h, 0.0)};
  const std::vector<std::uint8_t> edges = strip_width > 0 ? edge_oracle(d, tau) : std::vector<std::uint8_t>{};
  auto lands_on = [](int x, double disp, int t) {
    const double pos = static_cast<double>(x) - disp + 0.5;
    return pos >= t && pos < t + 1;
  };
  for (int y = 0; y < h; ++y) {
    // Borrowed disparity per source column, if any.
    std::vector<std::optional<double>> borrowed(static_cast<std::size_t>(w));
    if (strip_width > 0) {
      for (int x = 0; x < w; ++x) {
        for (int e = x - 1; e >= 0 && x - e <= strip_width; --e) {
          if (edges[static_cast<std::size_t>(y) * w + e]) {
            borrowed[x] = d.at(e, y);
            break;
          }
        }
      }
    }
    for (int t = 0; t < w; ++t) {
      int best_x = -1;
      double best_d = -std::numeric_limits<double>::infinity();
      for (int x = 0; x < w; ++x) {
        if (lands_on(x, d.at(x, y), t) && d.at(x, y) > best_d) {
          best_d = d.at(x, y);
          best_x = x;
        }
      }
      if (best_x < 0) {
        for (int x = 0; x < w; ++x) {
          if (borrowed[x] && lands_on(x, *borrowed[x], t) && *borrowed[x] > best_d) {
            best_d = *borrowed[x];
            best_x = x;
          }
        }
      }
      if (best_x < 0) continue;
      const std::size_t i = static_cast<std::size_t>(y) * w + t;
      out.holes[i] = 0;
      out.zbuffer[i] = best_d;
      for (int c = 0; c < 3; ++c) out.rgb[i * 3 + c] = left.at(best_x, y, c);
    }
  }
  return out;
}

// Direct 2-D Gaussian-window SSIM on Rec.601 luma, no separable filtering.
inline double reference_ssim(const ImagePlane& a, const ImagePlane& b) {
  constexpr int kWin = 11;
  constexpr double kSigma = 1.5;
  const double c1 = std::pow(0.01 * 255, 2);
  const double c2 = std::pow(0.03 * 255, 2);
  double weights[kWin][kWin];
  double total = 0.0;
  for (int i = 0; i < kWin; ++i) {
    for (int j = 0; j < kWin; ++j) {
      const double di = i - 5, dj = j - 5;
      weights[i][j] = std::exp(-(di * di + dj * dj) / (2 * kSigma * kSigma));
      total += weights[i][j];
    }
  }
  auto y_of = [](const ImagePlane& im, int x, int y) {
    return 0.299 * im.at(x, y, 0) + 0.587 * im.at(x, y, 1) + 0.114 * im.at(x, y, 2);
  };
  double sum = 0.0;
  int count = 0;
  for (int y0 = 0; y0 + kWin <= a.height(); ++y0) {
    for (int x0 = 0; x0 + kWin <= a.width(); ++x0) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int i = 0; i < kWin; ++i) {
        for (int j = 0; j < kWin; ++j) {
          const double wgt = weights[i][j] / total;
          const double va = y_of(a, x0 + j, y0 + i), vb = y_of(b, x0 + j, y0 + i);
          ma += wgt * va;
          mb += wgt * vb;
          saa += wgt * va * va;
          sbb += wgt * vb * vb;
          sab += wgt * va * vb;
        }
      }
      const double var_a = saa - ma * ma, var_b = sbb - mb * mb, cov = sab - ma * mb;
      sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
      ++count;
    }
  }
  return sum / count;
}

// Central differences of f at every index in `support`. `base` is perturbed in
// place and restored.
inline std::vector<double> central_differences(std::vector<double>& base, const std::vector<std::size_t>& support,
                                               double h, const std::function<double(const std::vector<double>&)>& f) {
  std::vector<double> g(base.size(), 0.0);
  for (std::size_t i : support) {
    const double keep = base[i];
    base[i] = keep + h;
    const double up = f(base);
    base[i] = keep - h;
    const double down = f(base);
    base[i] = keep;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

// max_i |a_i - b_i| / max_i |b_i|
inline double max_relative_error(const std::vector<double>& analytic, const std::vector<double>& numeric) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    diff = std::max(diff, std::fabs(analytic[i] - numeric[i]));
    scale = std::max(scale, std::fabs(numeric[i]));
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace stereosynth::testing
