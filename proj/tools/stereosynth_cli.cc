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

// stereosynth: stereo pair synthesis, evaluation and distillation-loss tool.
//
//   stereosynth synth      --manifest m.jsonl --out dir [--dmin --dmax --tau --strip-width --backend ...]
//   stereosynth mask-debug --manifest m.jsonl --out dir
//   stereosynth eval       --manifest m.jsonl --predictions preds/ --out dir
//   stereosynth loss       --pred p.pfm --gt gt.png --mono mono.pfm [--alpha --samples --variant --seed]
//
// Exit codes: 0 success, 1 partial failure, 2 configuration or usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <string>

#include "stereosynth/error.h"
#include "stereosynth/kernels.h"
#include "stereosynth/pipeline.h"
#include "stereosynth/serialize.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

int report_run(const stereosynth::RunSummary& summary) {
  std::cout << stereosynth::to_json(summary).dump(2) << "\n";
  for (const auto& f : summary.failures) std::cerr << "record '" << f.id << "' failed: " << f.error << "\n";
  return summary.ok() ? kExitOk : kExitPartial;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace stereosynth;

  CLI::App app{"Stereo training-pair synthesis, evaluation and distillation loss"};
  app.set_config("--config", "", "Key-value config file mirroring the long flags; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  PipelineConfig cfg;
  std::string backend_name = "propagate";
  std::string variant_name = "kl";
  bool no_ea = false;

  app.add_option("--manifest", cfg.manifest, "JSON-lines dataset manifest");
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_option("--seed", cfg.seed, "Global seed");
  app.add_option("--dmin", cfg.d_min, "Minimum disparity scale factor (px)")->capture_default_str();
  app.add_option("--dmax", cfg.d_max, "Maximum disparity scale factor (px)")->capture_default_str();
  app.add_option("--tau", cfg.edge.tau, "Edge threshold on the horizontal disparity drop (px)")->capture_default_str();
  app.add_option("--strip-width", cfg.edge.strip_width, "Background pixels co-warped per edge pixel")
      ->capture_default_str();
  app.add_flag("--no-ea", no_ea, "Disable edge-aware strip preservation");
  app.add_flag("--invert-depth", cfg.invert_depth, "Inputs are depth (far = large); use 1 - d");
  app.add_option("--backend", backend_name, "Inpainting backend")
      ->check(CLI::IsMember({"random", "propagate", "external"}))
      ->capture_default_str();
  app.add_option("--backend-cmd", cfg.backend_cmd, "External backend command with {image}, {output} and optional {mask}");
  app.add_option("--backend-jobs", cfg.backend_jobs, "Concurrent external backend processes")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  app.add_flag("--debug-masks", cfg.debug_masks, "Also write hole/edge/inpaint masks");
  app.add_option("--alpha", cfg.distill.alpha, "Distillation loss weight")->capture_default_str();
  app.add_option("--samples", cfg.distill.sample_count, "Pixels sampled per distillation loss")->capture_default_str();
  app.add_option("--epsilon", cfg.distill.epsilon, "Probability floor for the KL term")->capture_default_str();
  app.add_option("--variant", variant_name, "Distillation term")
      ->check(CLI::IsMember({"kl", "l2", "grad", "off"}))
      ->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Synthesize right views and GT disparity for every manifest record");
  auto* mask_debug = app.add_subcommand("mask-debug", "Write edge masks and edge-aware warp plans");
  auto* eval = app.add_subcommand("eval", "Evaluate predicted disparities against manifest ground truth");
  std::filesystem::path predictions;
  eval->add_option("--predictions", predictions, "Directory of <id>.png / <id>.pfm predictions")->required();
  auto* loss = app.add_subcommand("loss", "Evaluate the sparse + distillation loss on one prediction");
  std::filesystem::path pred_path, gt_path, mono_path;
  loss->add_option("--pred", pred_path, "Predicted disparity (PFM or KITTI PNG)")->required();
  loss->add_option("--gt", gt_path, "Sparse ground truth (KITTI PNG or PFM)")->required();
  loss->add_option("--mono", mono_path, "Dense monocular disparity (PFM or PNG)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  cfg.edge_aware = !no_ea;
  cfg.backend = *parse_inpaint_backend(backend_name);
  cfg.distill.variant = *parse_distill_variant(variant_name);
  cfg.distill.rng_seed = cfg.seed;

  auto require_paths = [&] {
    if (cfg.manifest.empty()) throw ConfigError("--manifest is required");
    if (cfg.out_dir.empty()) throw ConfigError("--out is required");
  };

  try {
    if (*synth) {
      require_paths();
      return report_run(run_synth(cfg));
    }
    if (*mask_debug) {
      require_paths();
      return report_run(run_mask_debug(cfg));
    }
    if (*eval) {
      require_paths();
      const EvalSummary summary = run_eval(cfg, predictions);
      std::cout << aggregate_json(summary).dump(2) << "\n";
      for (const auto& f : summary.failures) std::cerr << "record '" << f.id << "' failed: " << f.error << "\n";
      for (const auto& id : summary.missing) std::cerr << "record '" << id << "': prediction missing\n";
      for (const auto& id : summary.unmatched) std::cerr << "prediction '" << id << "' matches no manifest record\n";
      return summary.ok() ? kExitOk : kExitPartial;
    }
    if (*loss) {
      const LossReport report = run_loss(cfg.distill, pred_path, gt_path, mono_path);
      std::cout << to_json(report, cfg.distill).dump() << "\n";
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitUsage;
}
