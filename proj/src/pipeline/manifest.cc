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

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "stereosynth/error.h"
#include "stereosynth/pipeline.h"

namespace stereosynth {
namespace {

using nlohmann::json;

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string required_string(const json& j, const char* key, std::size_t line) {
  if (!j.contains(key) || !j[key].is_string() || j[key].get<std::string>().empty()) {
    throw ConfigError("manifest line " + std::to_string(line) + ": missing string field '" + key + "'");
  }
  return j[key].get<std::string>();
}

void check_id(const std::string& id, std::size_t line) {
  if (id == "." || id == ".." || id.find('/') != std::string::npos || id.find('\\') != std::string::npos ||
      id.find('\0') != std::string::npos) {
    throw ConfigError("manifest line " + std::to_string(line) + ": id '" + id + "' is not a valid directory name");
  }
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest '" + path.string() + "'");
  const std::filesystem::path base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

  DatasetManifest manifest;
  std::set<std::string> seen;
  bool header_seen = false;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("manifest line " + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("manifest line " + std::to_string(line) + ": expected a JSON object");
    if (!header_seen) {
      if (!j.contains("manifest_version") || !j["manifest_version"].is_number_integer()) {
        throw ConfigError("manifest must start with a {\"manifest_version\": N} header line");
      }
      manifest.version = j["manifest_version"].get<int>();
      if (manifest.version != kManifestVersion) {
        throw ConfigError("unsupported manifest version " + std::to_string(manifest.version));
      }
      header_seen = true;
      continue;
    }
    ManifestRecord rec;
    rec.id = required_string(j, "id", line);
    check_id(rec.id, line);
    if (!seen.insert(rec.id).second) throw ConfigError("manifest line " + std::to_string(line) + ": duplicate id '" + rec.id + "'");
    rec.left = resolve(base, required_string(j, "left", line));
    rec.depth = resolve(base, required_string(j, "depth", line));
    if (j.contains("gt") && !j["gt"].is_null()) rec.gt = resolve(base, required_string(j, "gt", line));
    if (j.contains("right") && !j["right"].is_null()) rec.right = resolve(base, required_string(j, "right", line));
    manifest.records.push_back(std::move(rec));
  }
  return manifest;
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest '" + path.string() + "'");
  out << json{{"manifest_version", manifest.version}}.dump() << "\n";
  for (const ManifestRecord& r : manifest.records) {
    json j{{"id", r.id}, {"left", r.left.string()}, {"depth", r.depth.string()}};
    if (r.gt) j["gt"] = r.gt->string();
    if (r.right) j["right"] = r.right->string();
    out << j.dump() << "\n";
  }
}

}  // namespace stereosynth
