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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stereosynth/edge_aware.h"
#include "stereosynth/inpaint.h"
#include "stereosynth/loss.h"
#include "stereosynth/metrics.h"
#include "stereosynth/types.h"

namespace stereosynth {

struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  double d_min = 32.0;
  double d_max = 192.0;
  EdgeConfig edge;
  bool edge_aware = true;
  bool invert_depth = false;
  InpaintBackend backend = InpaintBackend::background_propagate;
  std::string backend_cmd;
  int backend_jobs = 1;
  DistillConfig distill;
  int workers = 1;
  bool debug_masks = false;

  // Checks everything that does not depend on a particular image.
  void validate() const;
};

inline constexpr int kManifestVersion = 1;

struct ManifestRecord {
  std::string id;
  std::filesystem::path left;
  std::filesystem::path depth;
  std::optional<std::filesystem::path> gt;
  std::optional<std::filesystem::path> right;
};

struct DatasetManifest {
  int version = kManifestVersion;
  std::vector<ManifestRecord> records;
};

// JSON-lines. The first line is the header {"manifest_version": 1}; each
// following line is {"id", "left", "depth", ["gt"], ["right"]}. Relative paths
// resolve against the manifest's directory. An empty file is an empty manifest.
DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

// Stable per-record seed: adding or removing records leaves others unchanged.
std::uint64_t record_seed(std::uint64_t global_seed, std::string_view id);
std::uint64_t inpaint_seed_for(std::uint64_t record_seed);

// Everything needed to regenerate one synthesized record from its inputs.
struct RecordProvenance {
  std::string id;
  std::filesystem::path left;
  std::filesystem::path depth;
  std::uint64_t global_seed = 0;
  std::uint64_t record_seed = 0;
  std::uint64_t inpaint_seed = 0;
  double d_min = 0.0;
  double d_max = 0.0;
  double scale_factor = 0.0;
  double tau = 0.0;
  int strip_width = 0;
  bool edge_aware = true;
  bool invert_depth = false;
  InpaintBackend backend = InpaintBackend::background_propagate;
  std::string backend_cmd;
};

struct SynthProducts {
  ImagePlane left;
  ImagePlane right;
  ImagePlane right_unfilled;
  DisparityMap disparity;  // quantized to the 1/256 px grid of the GT file
  MaskPlane hole_mask;     // plain-warp holes
  MaskPlane edge_mask;
  MaskPlane inpaint_mask;
  EAWarpPlan plan;
};

// depth -> f * depth -> 1/256 px quantization -> (EA) warp -> inpaint.
SynthProducts synthesize(const ImagePlane& left, const RelativeDepthMap& depth, const RecordProvenance& prov,
                         const ExternalBackendConfig* external);

// Loads the record's inputs, runs synthesize() and writes the record directory
// out_dir/<id>/ (left.png, right.png, disparity.png, provenance.json and the
// debug masks when asked).
void write_record(const RecordProvenance& prov, const std::filesystem::path& out_dir, bool debug_masks,
                  const ExternalBackendConfig* external);

// Regenerates a record from provenance.json alone (plus the inputs it names).
void replay_record(const std::filesystem::path& provenance_json, const std::filesystem::path& out_dir,
                   const ExternalBackendConfig* external = nullptr);

struct RecordFailure {
  std::string id;
  std::string error;
};

struct RunSummary {
  std::size_t processed = 0;
  std::size_t succeeded = 0;
  std::vector<RecordFailure> failures;  // manifest order
  bool ok() const { return failures.empty(); }
};

RunSummary run_synth(const PipelineConfig& cfg);

// Edge masks, plain hole masks, EA inpaint masks and the strip plan per record.
RunSummary run_mask_debug(const PipelineConfig& cfg);

struct EvalSummary {
  std::size_t evaluated = 0;
  std::vector<std::string> missing;            // manifest ids with no prediction file
  std::vector<RecordFailure> failures;         // unreadable inputs, size mismatches
  std::vector<std::string> unmatched;          // prediction files with no manifest record
  std::vector<std::pair<std::string, MetricsReport>> reports;  // manifest order
  MetricsReport aggregate;                     // mean over evaluated pairs
  std::size_t psnr_pairs = 0;
  std::size_t ssim_pairs = 0;
  bool ok() const { return missing.empty() && failures.empty() && unmatched.empty(); }
};

// Predictions are <predictions_dir>/<id>.png (KITTI 16-bit) or <id>.pfm.
// Writes <out_dir>/metrics.jsonl: one object per record then the aggregate.
EvalSummary run_eval(const PipelineConfig& cfg, const std::filesystem::path& predictions_dir);

// Loads the three maps (KITTI PNG or PFM by extension) and evaluates combined_loss.
LossReport run_loss(const DistillConfig& cfg, const std::filesystem::path& pred, const std::filesystem::path& gt,
                    const std::filesystem::path& mono);

}  // namespace stereosynth
