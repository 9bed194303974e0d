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

#include "stereosynth/error.h"
#include "stereosynth/pipeline.h"
#include "stereosynth/rng.h"

namespace stereosynth {

void PipelineConfig::validate() const {
  if (!(d_min > 0.0)) throw ConfigError("--dmin must be > 0");
  if (!(d_min <= d_max)) throw ConfigError("--dmin must not exceed --dmax");
  // The ground-truth file stores round(d * 256) in 16 bits.
  if (!(d_max < 256.0)) throw ConfigError("--dmax must be below 256 to fit the 16-bit disparity encoding");
  edge.validate();
  if (workers < 1) throw ConfigError("--workers must be >= 1");
  if (backend_jobs < 1) throw ConfigError("--backend-jobs must be >= 1");
  if (backend == InpaintBackend::external) {
    for (const char* key : {"{image}", "{output}"}) {
      if (backend_cmd.find(key) == std::string::npos) {
        throw ConfigError(std::string("--backend-cmd must contain the ") + key + " placeholder");
      }
    }
  }
}

std::uint64_t record_seed(std::uint64_t global_seed, std::string_view id) { return mix_key(global_seed, fnv1a64(id)); }

std::uint64_t inpaint_seed_for(std::uint64_t record_seed) { return mix_key(record_seed, 0x1a9a1d7ULL); }

}  // namespace stereosynth
