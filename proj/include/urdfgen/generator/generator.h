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


#ifndef URDFGEN_GENERATOR_GENERATOR_H_
#define URDFGEN_GENERATOR_GENERATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "urdfgen/codec/codec.h"
#include "urdfgen/dataset/condition.h"
#include "urdfgen/diffusion/sampler.h"
#include "urdfgen/diffusion/train.h"
#include "urdfgen/urdf/model.h"

namespace urdfgen {

struct StopThresholds {
  double eot_distance = 0.05;        // latent RMS
  double redundancy_overlap = 0.6;   // voxel IoU against earlier parts
  int redundancy_resolution = 64;

  void validate() const;  // InvalidArgument
};

struct GenerationConfig {
  StopThresholds thresholds;
  int k_max = 8;
  int sampling_steps = kDefaultSamplingSteps;
  int mesh_resolution = 64;
  CodecConfig codec;  // must match the latents the model was trained on
  // Once all parts are decoded, moves each joint origin along its axis to the
  // point nearest the Aabb center of the whole generated object. The axis
  // line is unchanged.
  bool snap_origin = true;

  void validate() const;
};

struct PartSample {
  LatentMatrix z_shared;   // model space, t = 0
  LatentShapeCode z_3d;    // codec space
  JointCandidate joint;
};

// One seeded reverse process under `cond`, then the geometry and joint
// heads.
PartSample generate_part(const Model& model, const ConditionSet& cond, int steps, std::uint64_t seed);

TriangleMesh decode_part(const LatentShapeCode& z_3d, int resolution);

struct GenerationState {
  std::vector<TriangleMesh> decoded_parts;
  std::optional<LatentShapeCode> context;  // merged decoded parts
  int k = 0;                               // number of decoded parts
};

// Appends the part and re-encodes the merged geometry with the surface seed
// used for training prefixes of the same length.
GenerationState update_context(GenerationState state, const TriangleMesh& new_part, const CodecConfig& cfg);

bool is_eot(const LatentShapeCode& z_3d, const StopThresholds& thresholds);
// Voxel IoU between the part and the union of decoded parts exceeds the
// threshold. Requires at least one decoded part.
bool is_redundant(const TriangleMesh& new_part, const GenerationState& state, const StopThresholds& thresholds);

enum class Termination { kEot, kRedundancy, kKMax };
std::string termination_name(Termination t);

struct PartRecord {
  int step = 0;  // 1-based
  std::uint64_t seed = 0;
  double latent_rms = 0.0;
  bool eot = false;
  bool redundant = false;
  bool empty_surface = false;
  JointCandidate candidate;
};

struct GenerationReport {
  std::uint64_t seed = 0;
  int steps = 0;  // sampling steps per part
  Termination reason = Termination::kKMax;
  std::vector<PartRecord> parts;
};

struct GenerationResult {
  ArticulatedObject object;
  GenerationReport report;
};

std::uint64_t part_seed(std::uint64_t seed, int step);

// Autoregressive loop: sample, stop on EoT, decode, stop on redundancy,
// attach to the base, refresh the context. The first part is the base; an
// empty decode ends generation like EoT. Throws GenerationFailed when no part
// survives.
GenerationResult generate_object(const Model& model, const ConditionSet& cond, const GenerationConfig& cfg,
                                 std::uint64_t seed);

nlohmann::json report_to_json(const GenerationReport& report);

}  // namespace urdfgen

#endif  // URDFGEN_GENERATOR_GENERATOR_H_
