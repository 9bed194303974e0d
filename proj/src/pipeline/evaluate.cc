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
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

#include "stereosynth/error.h"
#include "stereosynth/image_io.h"
#include "stereosynth/pipeline.h"
#include "stereosynth/serialize.h"
#include "work_pool.h"

namespace stereosynth {
namespace {

using nlohmann::json;

std::optional<std::filesystem::path> find_prediction(const std::filesystem::path& dir, const std::string& id) {
  for (const char* ext : {".png", ".pfm"}) {
    const auto p = dir / (id + ext);
    if (std::filesystem::exists(p)) return p;
  }
  return std::nullopt;
}

enum class Outcome { ok, missing, failed };

struct PairResult {
  Outcome outcome = Outcome::failed;
  MetricsReport report;
  std::string error;
};

}  // namespace

EvalSummary run_eval(const PipelineConfig& cfg, const std::filesystem::path& predictions_dir) {
  if (cfg.workers < 1) throw ConfigError("--workers must be >= 1");
  if (!std::filesystem::is_directory(predictions_dir)) {
    throw ConfigError("predictions directory '" + predictions_dir.string() + "' does not exist");
  }
  const DatasetManifest manifest = load_manifest(cfg.manifest);
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<PairResult> results(manifest.records.size());
  detail::parallel_for_each_index(manifest.records.size(), cfg.workers, [&](std::size_t i) {
    const ManifestRecord& rec = manifest.records[i];
    PairResult& res = results[i];
    const auto pred_path = find_prediction(predictions_dir, rec.id);
    if (!pred_path) {
      res.outcome = Outcome::missing;
      return;
    }
    try {
      if (!rec.gt) throw Error("manifest record has no ground truth");
      const DisparityMap pred = read_disparity(*pred_path);
      const DisparityMap gt = read_disparity(*rec.gt);
      if (rec.right) {
        const ImagePlane left = read_image(rec.left);
        const ImagePlane right = read_image(*rec.right);
        res.report = evaluate_pair(pred, gt, &left, &right);
      } else {
        res.report = evaluate_pair(pred, gt, nullptr, nullptr);
      }
      res.outcome = Outcome::ok;
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  });

  EvalSummary summary;
  std::set<std::string> ids;
  double epe = 0.0, d1 = 0.0, gt2 = 0.0, psnr_sum = 0.0, ssim_sum = 0.0;
  std::ofstream out(cfg.out_dir / "metrics.jsonl");
  if (!out) throw Error("cannot write '" + (cfg.out_dir / "metrics.jsonl").string() + "'");
  for (std::size_t i = 0; i < results.size(); ++i) {
    const std::string& id = manifest.records[i].id;
    ids.insert(id);
    const PairResult& res = results[i];
    json line;
    switch (res.outcome) {
      case Outcome::missing:
        summary.missing.push_back(id);
        line = {{"id", id}, {"status", "missing"}};
        break;
      case Outcome::failed:
        summary.failures.push_back({id, res.error});
        line = {{"id", id}, {"status", "error"}, {"error", res.error}};
        break;
      case Outcome::ok:
        line = to_json(res.report);
        line["id"] = id;
        line["status"] = "ok";
        ++summary.evaluated;
        epe += res.report.epe;
        d1 += res.report.d1;
        gt2 += res.report.gt2px;
        if (res.report.psnr) {
          psnr_sum += *res.report.psnr;
          ++summary.psnr_pairs;
        }
        if (res.report.ssim) {
          ssim_sum += *res.report.ssim;
          ++summary.ssim_pairs;
        }
        summary.reports.emplace_back(id, res.report);
        break;
    }
    out << line.dump() << "\n";
  }

  for (const auto& entry : std::filesystem::directory_iterator(predictions_dir)) {
    const auto ext = entry.path().extension().string();
    if (!entry.is_regular_file() || (ext != ".png" && ext != ".pfm")) continue;
    const std::string stem = entry.path().stem().string();
    if (!ids.contains(stem)) summary.unmatched.push_back(stem);
  }
  std::sort(summary.unmatched.begin(), summary.unmatched.end());

  if (summary.evaluated > 0) {
    const double n = static_cast<double>(summary.evaluated);
    summary.aggregate.epe = epe / n;
    summary.aggregate.d1 = d1 / n;
    summary.aggregate.gt2px = gt2 / n;
  }
  if (summary.psnr_pairs > 0) summary.aggregate.psnr = psnr_sum / static_cast<double>(summary.psnr_pairs);
  if (summary.ssim_pairs > 0) summary.aggregate.ssim = ssim_sum / static_cast<double>(summary.ssim_pairs);
  out << aggregate_json(summary).dump() << "\n";
  if (!out) throw Error("write failed for metrics.jsonl");
  return summary;
}

LossReport run_loss(const DistillConfig& cfg, const std::filesystem::path& pred, const std::filesystem::path& gt,
                    const std::filesystem::path& mono) {
  cfg.validate();
  return combined_loss(read_disparity(pred), read_disparity(gt), read_disparity(mono), cfg);
}

}  // namespace stereosynth
