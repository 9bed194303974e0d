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

#include <json.hpp>

#include "stereosynth/loss.h"
#include "stereosynth/metrics.h"
#include "stereosynth/pipeline.h"

namespace stereosynth {

// Doubles that may be infinite are written as the strings "inf" / "-inf".
nlohmann::json number_or_inf(double v);
double number_from_json(const nlohmann::json& j);

nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(const LossReport& report, const DistillConfig& cfg);
nlohmann::json to_json(const RecordProvenance& prov);
RecordProvenance provenance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunSummary& summary);
nlohmann::json aggregate_json(const EvalSummary& summary);

}  // namespace stereosynth
