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
#include <iostream>

#include <json.hpp>

#include "stereosynth/error.h"
#include "stereosynth/image_io.h"
#include "stereosynth/pipeline.h"
#include "stereosynth/scaling.h"
#include "stereosynth/serialize.h"
#include "stereosynth/warp.h"
#include "work_pool.h"

namespace stereosynth {
namespace {

using nlohmann::json;

// Snaps every disparity to the 1/256 px grid of the KITTI file so the written
// ground truth is exactly the geometry used for warping. The smallest code is
// 1, because raw 0 would read back as invalid.
DisparityMap quantize_to_kitti_grid(const DisparityMap& d) {
  std::vector<double> values(d.pixel_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double raw = std::max(1.0, std::round(d.values()[i] * 256.0));
    if (raw > 65535.0) throw Error("disparity exceeds the 16-bit encodable range");
    values[i] = raw / 256.0;
  }
  return DisparityMap::dense(d.width(), d.height(), std::move(values));
}

struct PreparedRecord {
  ImagePlane left;
  DisparityMap disparity;
  WarpResult plain;
  EAWarpOutput ea;
};

PreparedRecord prepare(const ImagePlane& left, const RelativeDepthMap& depth_in, const RecordProvenance& prov) {
  if (left.width() != depth_in.width() || left.height() != depth_in.height()) {
    throw Error("depth map is " + std::to_string(depth_in.width()) + "x" + std::to_string(depth_in.height()) +
                " but the image is " + std::to_string(left.width()) + "x" + std::to_string(left.height()));
  }
  ScaleConfig{prov.d_min, prov.d_max, prov.record_seed}.validate(left.width());
  const RelativeDepthMap depth = prov.invert_depth ? depth_in.inverted() : depth_in;
  DisparityMap disparity = quantize_to_kitti_grid(scale_to_pixels(depth, prov.scale_factor));
  const EdgeConfig edge{prov.tau, prov.strip_width};
  WarpResult plain = warp_left_to_right(left, disparity);
  EAWarpOutput ea = prov.edge_aware
                        ? warp_with_ea(left, disparity, edge)
                        : EAWarpOutput{plain, EAWarpPlan{detect_edges(disparity, edge), {}, plain.hole_mask}};
  return PreparedRecord{left, std::move(disparity), std::move(plain), std::move(ea)};
}

RecordProvenance provenance_for(const PipelineConfig& cfg, const ManifestRecord& rec) {
  RecordProvenance p;
  p.id = rec.id;
  p.left = std::filesystem::absolute(rec.left).lexically_normal();
  p.depth = std::filesystem::absolute(rec.depth).lexically_normal();
  p.global_seed = cfg.seed;
  p.record_seed = record_seed(cfg.seed, rec.id);
  p.inpaint_seed = inpaint_seed_for(p.record_seed);
  p.d_min = cfg.d_min;
  p.d_max = cfg.d_max;
  p.scale_factor = sample_scale(ScaleConfig{cfg.d_min, cfg.d_max, p.record_seed}, 0);
  p.tau = cfg.edge.tau;
  p.strip_width = cfg.edge.strip_width;
  p.edge_aware = cfg.edge_aware;
  p.invert_depth = cfg.invert_depth;
  p.backend = cfg.backend;
  p.backend_cmd = cfg.backend == InpaintBackend::external ? cfg.backend_cmd : "";
  return p;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

json plan_json(const PreparedRecord& r) {
  json strips = json::array();
  for (const StripSource& s : r.ea.plan.strip_sources) strips.push_back({s.x, s.y, s.disparity});
  return json{{"edge_pixels", r.ea.plan.edge_mask.count()},
              {"plain_holes", r.plain.hole_mask.count()},
              {"inpaint_pixels", r.ea.plan.inpaint_mask.count()},
              {"strip_placed", r.ea.warp.strip.placed},
              {"strip_dropped_off_frame", r.ea.warp.strip.dropped_off_frame},
              {"strip_lost_collision", r.ea.warp.strip.lost_collision},
              {"strip_sources", strips}};
}

template <typename Fn>
RunSummary run_over_manifest(const PipelineConfig& cfg, Fn&& per_record) {
  cfg.validate();
  const DatasetManifest manifest = load_manifest(cfg.manifest);
  std::filesystem::create_directories(cfg.out_dir);
  std::vector<std::optional<std::string>> errors(manifest.records.size());
  detail::parallel_for_each_index(manifest.records.size(), cfg.workers, [&](std::size_t i) {
    try {
      per_record(manifest.records[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  RunSummary summary;
  summary.processed = manifest.records.size();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) {
      summary.failures.push_back({manifest.records[i].id, *errors[i]});
    } else {
      ++summary.succeeded;
    }
  }
  write_json(to_json(summary), cfg.out_dir / "summary.json");
  return summary;
}

}  // namespace

SynthProducts synthesize(const ImagePlane& left, const RelativeDepthMap& depth, const RecordProvenance& prov,
                         const ExternalBackendConfig* external) {
  PreparedRecord r = prepare(left, depth, prov);
  const MaskPlane& fill = r.ea.plan.inpaint_mask;
  ImagePlane right = r.ea.warp.right_image;
  if (fill.count() > 0) {
    right = inpaint(InpaintRequest{r.ea.warp.right_image, fill, prov.backend, prov.inpaint_seed}, external);
  }
  return SynthProducts{std::move(r.left),          std::move(right),          r.ea.warp.right_image,
                       std::move(r.disparity),     std::move(r.plain.hole_mask), r.ea.plan.edge_mask,
                       r.ea.plan.inpaint_mask,     std::move(r.ea.plan)};
}

void write_record(const RecordProvenance& prov, const std::filesystem::path& out_dir, bool debug_masks,
                  const ExternalBackendConfig* external) {
  const ImagePlane left = read_image(prov.left);
  const RelativeDepthMap depth = read_relative_depth(prov.depth);
  const SynthProducts products = synthesize(left, depth, prov, external);

  const std::filesystem::path dir = out_dir / prov.id;
  std::filesystem::create_directories(dir);
  write_image(products.left, dir / "left.png");
  write_image(products.right, dir / "right.png");
  write_disparity_kitti_png(products.disparity, dir / "disparity.png");
  if (debug_masks) {
    write_image(products.right_unfilled, dir / "right_unfilled.png");
    write_mask_png(products.hole_mask, dir / "hole_mask.png");
    write_mask_png(products.edge_mask, dir / "edge_mask.png");
    write_mask_png(products.inpaint_mask, dir / "inpaint_mask.png");
  }
  write_json(to_json(prov), dir / "provenance.json");
}

void replay_record(const std::filesystem::path& provenance_json, const std::filesystem::path& out_dir,
                   const ExternalBackendConfig* external) {
  std::ifstream in(provenance_json);
  if (!in) throw Error("cannot open '" + provenance_json.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed provenance: ") + e.what());
  }
  const RecordProvenance prov = provenance_from_json(j);
  std::optional<ExternalBackendConfig> ext;
  if (prov.backend == InpaintBackend::external && external == nullptr) {
    ext = ExternalBackendConfig{prov.backend_cmd, out_dir / ".inpaint-work", false};
    external = &*ext;
  }
  write_record(prov, out_dir, false, external);
}

RunSummary run_synth(const PipelineConfig& cfg) {
  set_external_backend_concurrency(cfg.backend_jobs);
  const std::filesystem::path workdir = cfg.out_dir / ".inpaint-work";
  const ExternalBackendConfig external{cfg.backend_cmd, workdir, false};
  RunSummary summary = run_over_manifest(cfg, [&](const ManifestRecord& rec) {
    write_record(provenance_for(cfg, rec), cfg.out_dir, cfg.debug_masks,
                 cfg.backend == InpaintBackend::external ? &external : nullptr);
  });
  std::error_code ec;
  std::filesystem::remove(workdir, ec);  // only succeeds when empty
  return summary;
}

RunSummary run_mask_debug(const PipelineConfig& cfg) {
  return run_over_manifest(cfg, [&](const ManifestRecord& rec) {
    const RecordProvenance prov = provenance_for(cfg, rec);
    const PreparedRecord r = prepare(read_image(prov.left), read_relative_depth(prov.depth), prov);
    const std::filesystem::path dir = cfg.out_dir / prov.id;
    std::filesystem::create_directories(dir);
    write_mask_png(r.ea.plan.edge_mask, dir / "edge_mask.png");
    write_mask_png(r.plain.hole_mask, dir / "hole_mask.png");
    write_mask_png(r.ea.plan.inpaint_mask, dir / "inpaint_mask.png");
    json plan = plan_json(r);
    plan["provenance"] = to_json(prov);
    write_json(plan, dir / "ea_plan.json");
  });
}

}  // namespace stereosynth
