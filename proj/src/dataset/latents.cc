// Copyright 2026 The urdfgen Authors
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


#include "urdfgen/dataset/latents.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"

namespace urdfgen {
namespace {

using nlohmann::json;

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 json_vec(const json& j) { return Vec3(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()); }

}  // namespace

LatentShapeCode encode_mesh(const TriangleMesh& mesh, const CodecConfig& cfg, std::uint64_t seed) {
  return encode(sample_surface(mesh, cfg.n_sample_points, seed), cfg);
}

LatentCacheEntry precompute_latents(const std::string& id, const ArticulatedObject& obj,
                                    const CodecConfig& cfg) {
  try {
    LatentCacheEntry entry;
    entry.id = id;
    entry.z_whole = encode_mesh(merged_mesh(obj), cfg, kWholeSurfaceSeed);
    std::vector<TriangleMesh> prefix;
    for (int k = 0; k < obj.size(); ++k) {
      const Link& link = obj.links[k];
      entry.names.push_back(link.name);
      entry.joints.push_back(link.joint);
      entry.z_part.push_back(encode_mesh(link.mesh, cfg, part_surface_seed(k)));
      prefix.push_back(link.mesh);
      entry.z_prefix.push_back(encode_mesh(merge_meshes(prefix), cfg, part_surface_seed(k)));
    }
    return entry;
  } catch (const Error& e) {
    throw InvalidMesh("record " + id + ": " + e.what());
  }
}

std::vector<LatentCacheEntry> precompute_latents(std::span<const CacheInput> inputs, const CodecConfig& cfg) {
  const int n = static_cast<int>(inputs.size());
  std::vector<LatentCacheEntry> out(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = precompute_latents(inputs[i].id, *inputs[i].object, cfg);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw InvalidMesh(e);
  }
  return out;
}

void write_latent_cache(const std::filesystem::path& dir, std::span<const LatentCacheEntry> entries,
                        const CodecConfig& cfg) {
  std::filesystem::create_directories(dir);
  json manifest;
  manifest["format"] = "urdfgen-latent-cache";
  manifest["codec"] = {{"m_tokens", cfg.m_tokens},
                       {"feature_width", cfg.feature_width},
                       {"n_sample_points", cfg.n_sample_points}};
  json records = json::array();
  for (const LatentCacheEntry& e : entries) {
    const auto sub = dir / e.id;
    std::filesystem::create_directories(sub);
    write_lsc(sub / "whole.lsc", e.z_whole);
    json links = json::array();
    for (int k = 0; k < e.link_count(); ++k) {
      write_lsc(sub / ("part_" + std::to_string(k) + ".lsc"), e.z_part[k]);
      write_lsc(sub / ("prefix_" + std::to_string(k) + ".lsc"), e.z_prefix[k]);
      json link = {{"name", e.names[k]}};
      if (const auto& j = e.joints[k]) {
        link["joint"] = {{"origin", vec_json(j->origin)}, {"axis", vec_json(j->axis)},
                         {"type", joint_type_name(j->type)}, {"lower", j->lower},
                         {"upper", j->upper}, {"parent", j->parent}};
      }
      links.push_back(std::move(link));
    }
    records.push_back({{"id", e.id}, {"links", std::move(links)}});
  }
  manifest["records"] = std::move(records);
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
}

std::vector<LatentCacheEntry> read_latent_cache(const std::filesystem::path& dir, CodecConfig* cfg) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("cannot read " + (dir / "manifest.json").string());
  json manifest;
  try {
    in >> manifest;
    if (cfg) {
      cfg->m_tokens = manifest.at("codec").at("m_tokens").get<int>();
      cfg->feature_width = manifest.at("codec").at("feature_width").get<int>();
      cfg->n_sample_points = manifest.at("codec").at("n_sample_points").get<int>();
    }
    std::vector<LatentCacheEntry> entries;
    for (const json& r : manifest.at("records")) {
      LatentCacheEntry e;
      e.id = r.at("id").get<std::string>();
      const auto sub = dir / e.id;
      e.z_whole = read_lsc(sub / "whole.lsc");
      int k = 0;
      for (const json& link : r.at("links")) {
        e.names.push_back(link.at("name").get<std::string>());
        std::optional<JointSpec> joint;
        if (link.contains("joint")) {
          const json& j = link.at("joint");
          JointSpec spec;
          spec.origin = json_vec(j.at("origin"));
          spec.axis = json_vec(j.at("axis"));
          spec.type = parse_joint_type(j.at("type").get<std::string>());
          spec.lower = j.at("lower").get<double>();
          spec.upper = j.at("upper").get<double>();
          spec.parent = j.at("parent").get<int>();
          joint = spec;
        }
        e.joints.push_back(joint);
        e.z_part.push_back(read_lsc(sub / ("part_" + std::to_string(k) + ".lsc")));
        e.z_prefix.push_back(read_lsc(sub / ("prefix_" + std::to_string(k) + ".lsc")));
        ++k;
      }
      entries.push_back(std::move(e));
    }
    return entries;
  } catch (const json::exception& e) {
    throw SchemaError("latent cache manifest: " + std::string(e.what()));
  }
}

}  // namespace urdfgen
