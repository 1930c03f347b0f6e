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


#ifndef URDFGEN_DATASET_LATENTS_H_
#define URDFGEN_DATASET_LATENTS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "urdfgen/codec/codec.h"
#include "urdfgen/urdf/model.h"

namespace urdfgen {

// Surface sampling seeds. Part k and the prefix ending at part k share a seed,
// so the one-part prefix equals the base encoding. The generator re-encodes
// its context with the same policy.
inline constexpr std::uint64_t kWholeSurfaceSeed = 0x5EED0000ULL;
inline std::uint64_t part_surface_seed(int k) { return 0x5EED1000ULL + static_cast<std::uint64_t>(k); }

LatentShapeCode encode_mesh(const TriangleMesh& mesh, const CodecConfig& cfg, std::uint64_t seed);

struct LatentCacheEntry {
  std::string id;
  LatentShapeCode z_whole;
  std::vector<LatentShapeCode> z_prefix;  // z_prefix[k] encodes parts 0..k merged
  std::vector<LatentShapeCode> z_part;
  std::vector<std::string> names;
  std::vector<std::optional<JointSpec>> joints;  // ground truth per link

  int link_count() const { return static_cast<int>(z_part.size()); }
  bool operator==(const LatentCacheEntry&) const = default;
};

// `obj` is expected in canonical order (base first). Codec failures are
// rethrown with the record id prepended.
LatentCacheEntry precompute_latents(const std::string& id, const ArticulatedObject& obj,
                                    const CodecConfig& cfg);

struct CacheInput {
  std::string id;
  const ArticulatedObject* object;
};
// Parallel over records; output order follows the input.
std::vector<LatentCacheEntry> precompute_latents(std::span<const CacheInput> inputs, const CodecConfig& cfg);

// Layout: dir/manifest.json plus dir/<id>/{whole,part_<k>,prefix_<k>}.lsc.
void write_latent_cache(const std::filesystem::path& dir, std::span<const LatentCacheEntry> entries,
                        const CodecConfig& cfg);
std::vector<LatentCacheEntry> read_latent_cache(const std::filesystem::path& dir,
                                                CodecConfig* cfg = nullptr);

}  // namespace urdfgen

#endif  // URDFGEN_DATASET_LATENTS_H_
