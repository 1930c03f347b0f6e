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


#include "urdfgen/generator/generator.h"

#include <cmath>

#include "urdfgen/common/error.h"
#include "urdfgen/dataset/latents.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/metrics/metrics.h"

namespace urdfgen {

void StopThresholds::validate() const {
  if (!(eot_distance > 0)) throw InvalidArgument("eot_distance must be positive");
  if (!(redundancy_overlap > 0 && redundancy_overlap < 1)) {
    throw InvalidArgument("redundancy_overlap must lie in (0, 1)");
  }
  if (redundancy_resolution <= 0) throw InvalidArgument("redundancy_resolution must be positive");
}

void GenerationConfig::validate() const {
  thresholds.validate();
  if (k_max < 1) throw InvalidArgument("k_max must be at least 1");
  if (sampling_steps < 1) throw InvalidArgument("sampling_steps must be at least 1");
}

PartSample generate_part(const Model& model, const ConditionSet& cond, int steps, std::uint64_t seed) {
  const DenoiserConfig& c = model.denoiser.config();
  const ModelCondition mc = to_model(cond, model.scaling);
  const VelocityFn velocity = [&](const LatentMatrix& z, int t) { return model.denoiser.denoise(z, t, mc); };
  PartSample s;
  s.z_shared = sample_reverse(velocity, c.tokens, c.latent_width, model.schedule, steps, seed);
  s.z_3d = model.scaling.to_code(s.z_shared);
  s.joint = model.denoiser.predict_joint(s.z_shared);
  return s;
}

TriangleMesh decode_part(const LatentShapeCode& z_3d, int resolution) { return extract_mesh(z_3d, resolution); }

GenerationState update_context(GenerationState state, const TriangleMesh& new_part, const CodecConfig& cfg) {
  if (new_part.empty()) throw InvalidArgument("update_context: empty part");
  state.decoded_parts.push_back(new_part);
  state.k = static_cast<int>(state.decoded_parts.size());
  state.context = encode_mesh(merge_meshes(state.decoded_parts), cfg, part_surface_seed(state.k - 1));
  return state;
}

bool is_eot(const LatentShapeCode& z_3d, const StopThresholds& thresholds) {
  return z_3d.rms() < thresholds.eot_distance;
}

bool is_redundant(const TriangleMesh& new_part, const GenerationState& state, const StopThresholds& thresholds) {
  if (state.decoded_parts.empty()) throw InvalidArgument("is_redundant: no decoded parts");
  return iou(std::span(&new_part, 1), state.decoded_parts, thresholds.redundancy_resolution) >
         thresholds.redundancy_overlap;
}

std::string termination_name(Termination t) {
  switch (t) {
    case Termination::kEot:
      return "eot";
    case Termination::kRedundancy:
      return "redundancy";
    case Termination::kKMax:
      return "k_max";
  }
  return "unknown";
}

std::uint64_t part_seed(std::uint64_t seed, int step) {
  // splitmix64 finalizer over (seed, step).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(step + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

Vec3 foot_on_axis(const Vec3& point, const Vec3& origin, const Vec3& axis) {
  return origin + (point - origin).dot(axis) * axis;
}

}  // namespace

GenerationResult generate_object(const Model& model, const ConditionSet& cond, const GenerationConfig& cfg,
                                 std::uint64_t seed) {
  cfg.validate();
  const DenoiserConfig& dc = model.denoiser.config();
  if (cfg.codec.m_tokens != dc.tokens || cfg.codec.feature_width != dc.latent_width) {
    throw InvalidArgument("codec config does not match the model latent shape");
  }

  GenerationResult out;
  out.report.seed = seed;
  out.report.steps = cfg.sampling_steps;
  out.report.reason = Termination::kKMax;
  GenerationState state;
  ConditionSet step_cond = cond;
  step_cond.context_tokens.reset();
  for (int k = 1; k <= cfg.k_max; ++k) {
    PartRecord rec;
    rec.step = k;
    rec.seed = part_seed(seed, k);
    const PartSample s = generate_part(model, step_cond, cfg.sampling_steps, rec.seed);
    rec.latent_rms = s.z_3d.rms();
    rec.candidate = s.joint;
    rec.eot = is_eot(s.z_3d, cfg.thresholds);
    if (rec.eot) {
      out.report.parts.push_back(rec);
      out.report.reason = Termination::kEot;
      break;
    }
    TriangleMesh mesh;
    try {
      mesh = decode_part(s.z_3d, cfg.mesh_resolution);
    } catch (const EmptySurface&) {
      rec.empty_surface = true;
      out.report.parts.push_back(rec);
      out.report.reason = Termination::kEot;
      break;
    }
    if (!state.decoded_parts.empty() && is_redundant(mesh, state, cfg.thresholds)) {
      rec.redundant = true;
      out.report.parts.push_back(rec);
      out.report.reason = Termination::kRedundancy;
      break;
    }
    Link link;
    link.name = k == 1 ? "base" : "link_" + std::to_string(k - 1);
    link.mesh = mesh;
    if (k > 1) {
      JointSpec j = s.joint.joint;
      j.parent = 0;
      link.joint = j;
    }
    out.object.links.push_back(std::move(link));
    out.report.parts.push_back(rec);
    state = update_context(std::move(state), mesh, cfg.codec);
    step_cond.context_tokens = state.context;
  }
  if (out.object.links.empty()) throw GenerationFailed("no part generated before " + termination_name(out.report.reason));
  if (cfg.snap_origin) {
    const Vec3 center = bounds(merged_mesh(out.object)).center();
    for (Link& l : out.object.links) {
      if (l.joint) l.joint->origin = foot_on_axis(center, l.joint->origin, l.joint->axis);
    }
  }
  const auto diags = validate(out.object);
  if (!diags.empty()) throw GenerationFailed("generated object is invalid: " + diags.front().message);
  return out;
}

nlohmann::json report_to_json(const GenerationReport& report) {
  nlohmann::json parts = nlohmann::json::array();
  for (const PartRecord& p : report.parts) {
    const JointCandidate& c = p.candidate;
    nlohmann::json logits = nlohmann::json::array();
    for (Eigen::Index i = 0; i < c.logits.size(); ++i) logits.push_back(c.logits(i));
    parts.push_back({{"step", p.step},
                     {"seed", p.seed},
                     {"latent_rms", p.latent_rms},
                     {"eot", p.eot},
                     {"redundant", p.redundant},
                     {"empty_surface", p.empty_surface},
                     {"joint_candidate",
                      {{"type", std::string(joint_type_name(c.joint.type))},
                       {"origin", {c.joint.origin.x(), c.joint.origin.y(), c.joint.origin.z()}},
                       {"axis", {c.joint.axis.x(), c.joint.axis.y(), c.joint.axis.z()}},
                       {"limits", {c.joint.lower, c.joint.upper}},
                       {"raw_origin", {c.raw_origin.x(), c.raw_origin.y(), c.raw_origin.z()}},
                       {"raw_axis", {c.raw_axis.x(), c.raw_axis.y(), c.raw_axis.z()}},
                       {"raw_limits", {c.raw_limits(0), c.raw_limits(1)}},
                       {"logits", logits}}}});
  }
  return {{"seed", report.seed},
          {"steps", report.steps},
          {"termination", termination_name(report.reason)},
          {"parts", parts}};
}

}  // namespace urdfgen
