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

#include "stereosynth/serialize.h"

#include <cmath>
#include <limits>

#include "stereosynth/error.h"

namespace stereosynth {

using nlohmann::json;

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

json to_json(const MetricsReport& r) {
  json j{{"epe", r.epe}, {"d1", r.d1}, {"gt2px", r.gt2px}, {"valid_count", r.valid_count}};
  if (r.psnr) {
    j["psnr"] = number_or_inf(*r.psnr);
    j["ssim"] = r.ssim ? json(*r.ssim) : json(nullptr);
    j["evaluated_pixel_count"] = r.evaluated_pixel_count;
  }
  return j;
}

json to_json(const LossReport& r, const DistillConfig& cfg) {
  return json{{"total", r.total},
              {"sparse_term", r.sparse_term},
              {"distill_term", r.distill_term},
              {"alpha", cfg.alpha},
              {"N", cfg.sample_count},
              {"seed", cfg.rng_seed},
              {"epsilon", cfg.epsilon},
              {"variant", std::string(to_string(cfg.variant))},
              {"sampled_count", r.sampled_pixels.size()}};
}

json to_json(const RecordProvenance& p) {
  return json{{"format", "stereosynth-provenance"},
              {"version", 1},
              {"id", p.id},
              {"left", p.left.string()},
              {"depth", p.depth.string()},
              {"global_seed", p.global_seed},
              {"record_seed", p.record_seed},
              {"inpaint_seed", p.inpaint_seed},
              {"d_min", p.d_min},
              {"d_max", p.d_max},
              {"scale_factor", p.scale_factor},
              {"tau", p.tau},
              {"strip_width", p.strip_width},
              {"edge_aware", p.edge_aware},
              {"invert_depth", p.invert_depth},
              {"backend", std::string(to_string(p.backend))},
              {"backend_cmd", p.backend_cmd},
              {"disparity_encoding", "kitti16"}};
}

RecordProvenance provenance_from_json(const json& j) {
  if (j.value("format", "") != "stereosynth-provenance" || j.value("version", 0) != 1) {
    throw Error("not a version-1 provenance document");
  }
  RecordProvenance p;
  try {
    p.id = j.at("id").get<std::string>();
    p.left = j.at("left").get<std::string>();
    p.depth = j.at("depth").get<std::string>();
    p.global_seed = j.at("global_seed").get<std::uint64_t>();
    p.record_seed = j.at("record_seed").get<std::uint64_t>();
    p.inpaint_seed = j.at("inpaint_seed").get<std::uint64_t>();
    p.d_min = j.at("d_min").get<double>();
    p.d_max = j.at("d_max").get<double>();
    p.scale_factor = j.at("scale_factor").get<double>();
    p.tau = j.at("tau").get<double>();
    p.strip_width = j.at("strip_width").get<int>();
    p.edge_aware = j.at("edge_aware").get<bool>();
    p.invert_depth = j.at("invert_depth").get<bool>();
    p.backend_cmd = j.at("backend_cmd").get<std::string>();
    const auto backend = parse_inpaint_backend(j.at("backend").get<std::string>());
    if (!backend) throw Error("unknown backend in provenance");
    p.backend = *backend;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed provenance: ") + e.what());
  }
  return p;
}

json to_json(const RunSummary& s) {
  json failures = json::array();
  for (const auto& f : s.failures) failures.push_back({{"id", f.id}, {"error", f.error}});
  return json{{"processed", s.processed}, {"succeeded", s.succeeded}, {"failed", failures}};
}

json aggregate_json(const EvalSummary& s) {
  json j{{"aggregate", true}, {"pairs", s.evaluated}, {"missing", s.missing}, {"unmatched_predictions", s.unmatched}};
  json failed = json::array();
  for (const auto& f : s.failures) failed.push_back(f.id);
  j["failed"] = failed;
  if (s.evaluated > 0) {
    j["epe"] = s.aggregate.epe;
    j["d1"] = s.aggregate.d1;
    j["gt2px"] = s.aggregate.gt2px;
  } else {
    j["epe"] = j["d1"] = j["gt2px"] = nullptr;
  }
  j["psnr"] = s.psnr_pairs > 0 ? number_or_inf(*s.aggregate.psnr) : json(nullptr);
  j["ssim"] = s.ssim_pairs > 0 ? json(*s.aggregate.ssim) : json(nullptr);
  j["psnr_pairs"] = s.psnr_pairs;
  j["ssim_pairs"] = s.ssim_pairs;
  return j;
}

}  // namespace stereosynth
