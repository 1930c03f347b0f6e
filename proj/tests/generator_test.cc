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


#include <cmath>
#include <numeric>

#include "doctest.h"
#include "test_util.h"
#include "urdfgen/common/error.h"
#include "urdfgen/dataset/latents.h"
#include "urdfgen/dataset/toy.h"
#include "urdfgen/generator/generator.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/urdf/model.h"

namespace urdfgen {
namespace {

using testing::Gen;

LatentShapeCode constant_code(float value) {
  LatentShapeCode z = LatentShapeCode::zeros(32, 12);
  for (float& f : z.data) f = value;
  return z;
}

TEST_CASE("is_eot examples") {
  StopThresholds th;
  CHECK(is_eot(LatentShapeCode::zeros(32, 12), th));
  CHECK_FALSE(is_eot(constant_code(0.5f), th));
  const LatentShapeCode z = constant_code(0.03f);
  th.eot_distance = z.rms();
  CHECK_FALSE(is_eot(z, th));
  th.eot_distance = std::nextafter(z.rms(), 1.0);
  CHECK(is_eot(z, th));
}

TEST_CASE("is_redundant examples") {
  StopThresholds th;
  GenerationState state;
  const TriangleMesh a = make_box({0, 0, 0}, {1, 1, 1});
  CHECK_THROWS_AS(is_redundant(a, state, th), InvalidArgument);
  state.decoded_parts.push_back(a);
  state.k = 1;
  CHECK(is_redundant(a, state, th));
  CHECK_FALSE(is_redundant(make_box({2, 0, 0}, {3, 1, 1}), state, th));
  th.redundancy_overlap = 0.5;
  CHECK_FALSE(is_redundant(make_box({0.5, 0, 0}, {1.5, 1, 1}), state, th));
  // Compared against the union, not only the latest part.
  state.decoded_parts.push_back(make_box({1, 0, 0}, {2, 1, 1}));
  th.redundancy_overlap = 0.6;
  CHECK(is_redundant(make_box({0, 0, 0}, {2, 1, 1}), state, th));
}

TEST_CASE("decode_part") {
  CHECK_THROWS_AS(decode_part(LatentShapeCode::zeros(32, 12), 32), EmptySurface);
  const Vec3 lo(-0.6, -0.4, -0.5), hi(0.5, 0.6, 0.3);
  const LatentShapeCode z = encode_mesh(make_box(lo, hi), CodecConfig{}, 1);
  const int res = 48;
  const TriangleMesh m = decode_part(z, res);
  const double cell = 2 * kExtractionHalfExtent / (res - 1);
  const Aabb b = bounds(m);
  CHECK((b.min - lo).cwiseAbs().maxCoeff() <= 2 * cell);
  CHECK((b.max - hi).cwiseAbs().maxCoeff() <= 2 * cell);
  const TriangleMesh again = decode_part(z, res);
  CHECK(again.vertices == m.vertices);
  CHECK(again.triangles == m.triangles);
}

TriangleMesh permute_vertices(const TriangleMesh& mesh, Gen& gen) {
  std::vector<int> perm(mesh.vertices.size());
  std::iota(perm.begin(), perm.end(), 0);
  gen.shuffle(perm);
  TriangleMesh out;
  out.vertices.resize(mesh.vertices.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out.vertices[perm[i]] = mesh.vertices[i];
  for (const Triangle& t : mesh.triangles) out.triangles.push_back({perm[t[0]], perm[t[1]], perm[t[2]]});
  return out;
}

TEST_CASE("update_context re-encodes the merged parts") {
  Gen gen(1);
  const CodecConfig cfg;
  const TriangleMesh a = make_box({-0.8, -0.8, -0.8}, {0.2, 0.8, 0.8});
  const TriangleMesh b = make_box({0.25, -0.8, -0.8}, {0.8, 0.8, 0.0});
  GenerationState s1 = update_context({}, a, cfg);
  CHECK(s1.k == 1);
  CHECK(*s1.context == encode_mesh(a, cfg, part_surface_seed(0)));
  GenerationState s2 = update_context(s1, b, cfg);
  CHECK(s2.k == 2);
  const TriangleMesh ab[] = {a, b};
  CHECK(*s2.context == encode(sample_surface(merge_meshes(ab), cfg.n_sample_points, part_surface_seed(1)), cfg));
  // Same geometry, different vertex numbering.
  GenerationState p2 = update_context(update_context({}, permute_vertices(a, gen), cfg), permute_vertices(b, gen), cfg);
  CHECK(*p2.context == *s2.context);
  CHECK_THROWS_AS(update_context({}, TriangleMesh{}, cfg), InvalidArgument);
}

DenoiserConfig tiny_config() {
  DenoiserConfig c;
  c.width = 32;
  c.blocks = 2;
  c.heads = 2;
  c.mlp_ratio = 2;
  c.head_hidden = 32;
  return c;
}

TEST_CASE("generate_part with an untrained model") {
  Model model(tiny_config(), 1, LatentScaling::identity(12));
  ConditionSet cond;
  cond.whole_tokens = constant_code(0.1f);
  const PartSample a = generate_part(model, cond, 10, 5);
  CHECK(a.z_shared.rows() == 32);
  CHECK(a.z_shared.cols() == 12);
  CHECK(a.z_3d.m == 32);
  CHECK(std::abs(a.joint.joint.axis.norm() - 1) < 1e-12);
  CHECK(a.joint.joint.lower <= a.joint.joint.upper);
  const PartSample b = generate_part(model, cond, 10, 5);
  CHECK(a.z_shared == b.z_shared);
  // Zero output projection: the sample is a fixed function of the noise.
  cond.whole_tokens = constant_code(-0.7f);
  CHECK(generate_part(model, cond, 10, 5).z_shared == a.z_shared);

  // Axis head forced to emit (0, 2, 0).
  ParamStore& p = model.denoiser.params();
  p[p.find("head_axis.l2.w")].value.setZero();
  p[p.find("head_axis.l2.b")].value = Eigen::RowVector3d(0, 2, 0);
  const PartSample c = generate_part(model, cond, 10, 5);
  CHECK(c.joint.raw_axis == Vec3(0, 2, 0));
  CHECK(c.joint.joint.axis == Vec3(0, 1, 0));
  // Limits emitted in the wrong order are swapped.
  p[p.find("head_limits.l2.w")].value.setZero();
  p[p.find("head_limits.l2.b")].value = Eigen::RowVector2d(1.0, -0.5);
  p[p.find("head_type.l2.w")].value.setZero();
  p[p.find("head_type.l2.b")].value = Eigen::RowVector4d(0, 5, 0, 0);
  const PartSample d = generate_part(model, cond, 10, 5);
  CHECK(d.joint.joint.type == JointType::kRevolute);
  CHECK(d.joint.joint.lower == -0.5);
  CHECK(d.joint.joint.upper == 1.0);
}

TEST_CASE("generation fails when the first step is terminal") {
  LatentScaling tiny = LatentScaling::identity(12);
  tiny.scale.setConstant(1e-6);
  const Model model(tiny_config(), 1, tiny);
  ConditionSet cond;
  cond.whole_tokens = constant_code(0.1f);
  GenerationConfig cfg;
  cfg.sampling_steps = 5;
  CHECK_THROWS_AS(generate_object(model, cond, cfg, 1), GenerationFailed);
  cfg.codec.m_tokens = 16;
  CHECK_THROWS_AS(generate_object(model, cond, cfg, 1), InvalidArgument);
  cfg = {};
  cfg.k_max = 0;
  CHECK_THROWS_AS(generate_object(model, cond, cfg, 1), InvalidArgument);
}

// A small model overfit on one hinged box.
struct Overfit {
  ToySample sample;
  LatentCacheEntry entry;
  Model model;
};

const Overfit& overfit() {
  static const Overfit fixture = [] {
    ToySample s = generate_toy_dataset(1, ToyFamily::kHingedBox, 3)[0];
    LatentCacheEntry e = precompute_latents(s.record.id, s.object, CodecConfig{});
    const LatentScaling scaling = fit_scaling(std::span(&e, 1));
    Model model(tiny_config(), 2, scaling);
    const auto examples = build_examples(std::span(&e, 1), scaling);
    TrainConfig tc;
    tc.epochs = 1500;
    tc.batch_size = 3;
    tc.learning_rate = 2e-3;
    train(model, examples, tc);
    tc.stage = TrainStage::kStage2;
    tc.epochs = 300;
    tc.learning_rate = 1e-4;
    tc.head_learning_rate = 3e-3;
    train(model, examples, tc);
    return Overfit{std::move(s), std::move(e), std::move(model)};
  }();
  return fixture;
}

TEST_CASE("overfit model regenerates its object") {
  const Overfit& f = overfit();
  ConditionSet cond;
  cond.whole_tokens = f.entry.z_whole;
  GenerationConfig cfg;
  cfg.sampling_steps = 20;
  cfg.mesh_resolution = 48;
  const GenerationResult r = generate_object(f.model, cond, cfg, 11);
  INFO(report_to_json(r.report).dump(1));
  CHECK(r.report.reason == Termination::kEot);
  REQUIRE(r.object.size() == 2);
  CHECK(validate(r.object).empty());
  CHECK_FALSE(r.object.links[0].joint.has_value());
  const JointSpec& j = *r.object.links[1].joint;
  CHECK(j.parent == 0);
  CHECK(j.type == JointType::kRevolute);
  CHECK(std::acos(std::clamp(j.axis.dot(f.sample.object.links[1].joint->axis), -1.0, 1.0)) < 0.3);
  // Snapped origin lies on the predicted axis line.
  const Vec3 raw = r.report.parts[1].candidate.joint.origin;
  const Vec3 d = j.origin - raw;
  CHECK((d - d.dot(j.axis) * j.axis).norm() < 1e-9);
  // ...at the foot of the perpendicular from the object's Aabb center.
  CHECK(std::abs((bounds(merged_mesh(r.object)).center() - j.origin).dot(j.axis)) < 1e-9);

  const GenerationResult again = generate_object(f.model, cond, cfg, 11);
  CHECK(again.object.links[1].joint == r.object.links[1].joint);
  CHECK(again.object.links[1].mesh.vertices == r.object.links[1].mesh.vertices);

  const nlohmann::json js = report_to_json(r.report);
  CHECK(js["termination"] == "eot");
  CHECK(js["seed"] == 11);
  CHECK(js["parts"].size() == 3);
  CHECK(js["parts"][2]["eot"] == true);
  CHECK(js["parts"][1]["joint_candidate"]["logits"].size() == kJointTypeCount);
}

TEST_CASE("k_max caps generation") {
  const Overfit& f = overfit();
  ConditionSet cond;
  cond.whole_tokens = f.entry.z_whole;
  GenerationConfig cfg;
  cfg.sampling_steps = 20;
  cfg.mesh_resolution = 32;
  cfg.k_max = 1;
  const GenerationResult r = generate_object(f.model, cond, cfg, 11);
  CHECK(r.object.size() == 1);
  CHECK(r.report.reason == Termination::kKMax);
  CHECK(validate(r.object).empty());
}

TEST_CASE("part seeds are distinct per step") {
  CHECK(part_seed(1, 1) != part_seed(1, 2));
  CHECK(part_seed(1, 1) != part_seed(2, 1));
  CHECK(part_seed(7, 3) == part_seed(7, 3));
  CHECK(termination_name(Termination::kRedundancy) == "redundancy");
}

}  // namespace
}  // namespace urdfgen
