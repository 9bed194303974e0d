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

#include "stereosynth/loss.h"

#include <cmath>
#include <numeric>
#include <string>

#include "stereosynth/error.h"
#include "stereosynth/kernels.h"
#include "stereosynth/rng.h"

namespace stereosynth {
namespace {

void check_same_dims(const DisparityMap& a, const DisparityMap& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(std::string(what) + ": map dimensions differ");
  }
}

std::size_t index_of(const DisparityMap& map, const PixelCoord& p) {
  return static_cast<std::size_t>(p.y) * map.width() + p.x;
}

void check_sample(const DisparityMap& pred, const DisparityMap& mono, std::span<const PixelCoord> pixels,
                  const char* what) {
  check_same_dims(pred, mono, what);
  if (pixels.empty()) throw Error(std::string(what) + ": empty pixel sample");
  for (const PixelCoord& p : pixels) {
    if (p.x < 0 || p.y < 0 || p.x >= pred.width() || p.y >= pred.height()) {
      throw Error(std::string(what) + ": sampled pixel outside the map");
    }
    if (!pred.valid_at(p.x, p.y) || !mono.valid_at(p.x, p.y)) {
      throw Error(std::string(what) + ": sampled pixel is invalid in pred or mono");
    }
  }
}

}  // namespace

std::string_view to_string(DistillVariant variant) {
  switch (variant) {
    case DistillVariant::kl:
      return "kl";
    case DistillVariant::l2:
      return "l2";
    case DistillVariant::grad:
      return "grad";
    case DistillVariant::off:
      return "off";
  }
  return "unknown";
}

std::optional<DistillVariant> parse_distill_variant(std::string_view name) {
  if (name == "kl") return DistillVariant::kl;
  if (name == "l2") return DistillVariant::l2;
  if (name == "grad") return DistillVariant::grad;
  if (name == "off") return DistillVariant::off;
  return std::nullopt;
}

void DistillConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ConfigError("distill config: alpha must be >= 0");
  if (sample_count < 2) throw ConfigError("distill config: sample count must be >= 2");
  if (!(epsilon > 0.0) || !(epsilon < 1.0 / static_cast<double>(sample_count))) {
    throw ConfigError("distill config: epsilon must lie in (0, 1/N)");
  }
}

LossValue sparse_loss(const DisparityMap& pred, const DisparityMap& gt) {
  check_same_dims(pred, gt, "sparse_loss");
  const std::size_t count = gt.valid_count();
  if (count == 0) throw Error("sparse_loss: ground truth has no valid pixels");
  LossValue out;
  out.grad.assign(pred.pixel_count(), 0.0);
  const double inv = 1.0 / static_cast<double>(count);
  const double sum = kernels::active().smooth_l1(pred.values().data(), gt.values().data(), gt.valid().data(),
                                                 pred.pixel_count(), inv, out.grad.data());
  out.value = sum * inv;
  return out;
}

std::vector<PixelCoord> sample_pixels(const MaskPlane& eligible, std::size_t count, std::uint64_t seed) {
  std::vector<std::uint32_t> pool;
  for (std::size_t i = 0; i < eligible.bits().size(); ++i) {
    if (eligible.bits()[i]) pool.push_back(static_cast<std::uint32_t>(i));
  }
  if (pool.size() < count) {
    throw Error("sample_pixels: only " + std::to_string(pool.size()) + " eligible pixels for " +
                std::to_string(count) + " samples");
  }
  // Partial Fisher-Yates: the first `count` slots end up a uniform draw
  // without replacement.
  CounterRng rng(seed, 0x5a3b1e);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<PixelCoord> out(count);
  const auto w = static_cast<std::uint32_t>(eligible.width());
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = {static_cast<int>(pool[i] % w), static_cast<int>(pool[i] / w)};
  }
  return out;
}

LossValue kl_distill_loss(const DisparityMap& pred, const DisparityMap& mono, std::span<const PixelCoord> pixels,
                          double epsilon) {
  check_sample(pred, mono, pixels, "kl_distill_loss");
  const std::size_t n = pixels.size();
  const double nd = static_cast<double>(n);
  if (!(epsilon > 0.0) || !(epsilon < 1.0 / nd)) throw Error("kl_distill_loss: epsilon must lie in (0, 1/N)");

  std::vector<double> v(n), m(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = pred.values()[index_of(pred, pixels[i])];
    m[i] = mono.values()[index_of(mono, pixels[i])];
  }
  const double sum_v = std::accumulate(v.begin(), v.end(), 0.0);
  const double sum_m = std::accumulate(m.begin(), m.end(), 0.0);
  if (!(sum_v > 0.0)) throw Error("kl_distill_loss: prediction is zero on every sampled pixel");
  if (!(sum_m > 0.0)) throw Error("kl_distill_loss: mono map is zero on every sampled pixel");

  const double z_v = sum_v + epsilon * sum_v;
  const double z_m = sum_m + epsilon * sum_m;
  const double floor_v = epsilon * sum_v / nd;
  const double floor_m = epsilon * sum_m / nd;

  // log_ratio[i] = log(p_i / q_i)
  std::vector<double> p(n), log_ratio(n);
  double loss = 0.0;
  double log_ratio_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = (v[i] + floor_v) / z_v;
    const double q = (m[i] + floor_m) / z_m;
    log_ratio[i] = std::log(p[i]) - std::log(q);
    loss += p[i] * log_ratio[i];
    log_ratio_sum += log_ratio[i];
  }

  // dL/dv_k = [l_k + 1 + (eps/N)(sum_i l_i + N)] / Z - (L + 1) / S
  LossValue out;
  out.value = loss;
  out.grad.assign(pred.pixel_count(), 0.0);
  const double shared = (epsilon / nd) * (log_ratio_sum + nd);
  const double tail = (loss + 1.0) / sum_v;
  for (std::size_t i = 0; i < n; ++i) {
    out.grad[index_of(pred, pixels[i])] += (log_ratio[i] + 1.0 + shared) / z_v - tail;
  }
  return out;
}

LossValue l2_distill_loss(const DisparityMap& pred, const DisparityMap& mono, std::span<const PixelCoord> pixels) {
  check_sample(pred, mono, pixels, "l2_distill_loss");
  const double nd = static_cast<double>(pixels.size());
  LossValue out;
  out.grad.assign(pred.pixel_count(), 0.0);
  double sum = 0.0;
  for (const PixelCoord& px : pixels) {
    const std::size_t i = index_of(pred, px);
    const double r = pred.values()[i] - mono.values()[i];
    sum += r * r;
    out.grad[i] += 2.0 * r / nd;
  }
  out.value = sum / nd;
  return out;
}

LossValue grad_distill_loss(const DisparityMap& pred, const DisparityMap& mono, std::span<const PixelCoord> pixels) {
  check_sample(pred, mono, pixels, "grad_distill_loss");
  std::vector<std::size_t> pairs;
  for (const PixelCoord& px : pixels) {
    if (px.x + 1 < pred.width() && pred.valid_at(px.x + 1, px.y) && mono.valid_at(px.x + 1, px.y)) {
      pairs.push_back(index_of(pred, px));
    }
  }
  if (pairs.empty()) throw Error("grad_distill_loss: no sampled pixel has a valid right neighbour");
  const double md = static_cast<double>(pairs.size());
  const auto pv = pred.values();
  const auto mv = mono.values();
  LossValue out;
  out.grad.assign(pred.pixel_count(), 0.0);
  double sum = 0.0;
  for (std::size_t i : pairs) {
    const double r = (pv[i + 1] - pv[i]) - (mv[i + 1] - mv[i]);
    sum += r * r;
    const double g = 2.0 * r / md;
    out.grad[i] -= g;
    out.grad[i + 1] += g;
  }
  out.value = sum / md;
  return out;
}

LossReport combined_loss(const DisparityMap& pred, const DisparityMap& gt, const DisparityMap& mono,
                         const DistillConfig& cfg) {
  cfg.validate();
  check_same_dims(pred, gt, "combined_loss");
  check_same_dims(pred, mono, "combined_loss");

  LossValue sparse = sparse_loss(pred, gt);
  LossReport report;
  report.width = pred.width();
  report.height = pred.height();
  report.sparse_term = sparse.value;

  if (cfg.variant == DistillVariant::off) {
    report.distill_term = 0.0;
    report.total = report.sparse_term;
    report.grad_wrt_prediction = std::move(sparse.grad);
    return report;
  }

  std::vector<std::uint8_t> eligible(pred.pixel_count());
  for (std::size_t i = 0; i < eligible.size(); ++i) eligible[i] = pred.valid()[i] && mono.valid()[i];
  report.sampled_pixels =
      sample_pixels(MaskPlane(pred.width(), pred.height(), std::move(eligible)), cfg.sample_count, cfg.rng_seed);

  LossValue distill;
  switch (cfg.variant) {
    case DistillVariant::kl:
      distill = kl_distill_loss(pred, mono, report.sampled_pixels, cfg.epsilon);
      break;
    case DistillVariant::l2:
      distill = l2_distill_loss(pred, mono, report.sampled_pixels);
      break;
    case DistillVariant::grad:
      distill = grad_distill_loss(pred, mono, report.sampled_pixels);
      break;
    case DistillVariant::off:
      break;
  }
  report.distill_term = distill.value;
  report.total = report.sparse_term + cfg.alpha * report.distill_term;
  report.grad_wrt_prediction = std::move(sparse.grad);
  for (std::size_t i = 0; i < report.grad_wrt_prediction.size(); ++i) {
    report.grad_wrt_prediction[i] += cfg.alpha * distill.grad[i];
  }
  return report;
}

}  // namespace stereosynth
