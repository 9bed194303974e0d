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

#include "stereosynth/types.h"

namespace stereosynth {

enum class InpaintBackend { random_fill, background_propagate, external };

std::string_view to_string(InpaintBackend backend);
// Accepts "random", "propagate", "external" (the CLI spellings).
std::optional<InpaintBackend> parse_inpaint_backend(std::string_view name);

struct InpaintRequest {
  ImagePlane image;
  MaskPlane mask;  // true = fill
  InpaintBackend backend = InpaintBackend::background_propagate;
  std::uint64_t rng_seed = 0;
};

// Each hole takes the colour of a uniformly drawn non-hole pixel of the same
// image. Draws are keyed by (seed, pixel index).
ImagePlane inpaint_random(const InpaintRequest& req);

// Each hole takes the nearest non-hole colour to its right on the same row
// (the dis-occluded background side), else the nearest to its left. Rows with
// no known pixel copy the same column of the nearest row that has one
// (upper row on ties).
ImagePlane inpaint_background_propagate(const InpaintRequest& req);

struct ExternalBackendConfig {
  // Shell command with {image} and {output} placeholders; {mask} is optional.
  std::string command_template;
  // Parent of the private per-request directories.
  std::filesystem::path workdir;
  // Keep the per-request directory after a successful run.
  bool keep_files = false;
};

struct ExternalInpaintResult {
  ImagePlane image;
  // Non-hole pixels whose colour moved by more than 2 levels in any channel.
  std::size_t drifted_pixels = 0;
};

// Runs an out-of-process inpainter over PNG files. Throws on nonzero exit
// (message carries the captured stderr), on a missing or undecodable output,
// and on a dimension mismatch. Drift above tolerance is reported, not fatal.
ExternalInpaintResult inpaint_external(const InpaintRequest& req, const ExternalBackendConfig& backend);

// Upper bound on concurrently running external backend processes (default 1).
void set_external_backend_concurrency(int max_processes);

// Dispatches on req.backend. `external` may be null unless that backend is selected.
ImagePlane inpaint(const InpaintRequest& req, const ExternalBackendConfig* external);

}  // namespace stereosynth
