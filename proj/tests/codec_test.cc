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


#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "test_util.h"
#include "urdfgen/codec/codec.h"
#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/kernels/nearest.h"

namespace urdfgen {
namespace {

using testing::Gen;

OrientedPointCloud as_cloud(std::vector<Vec3> pts) {
  OrientedPointCloud c;
  c.normals.assign(pts.size(), Vec3(0, 0, 1));
  c.points = std::move(pts);
  return c;
}

TEST_CASE("farthest_point_sample examples") {
  const OrientedPointCloud square = as_cloud({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  std::vector<int> all = farthest_point_sample(square, 4, 17);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<int>{0, 1, 2, 3});

  const std::vector<Vec3> line = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {10, 0, 0}};
  CHECK(farthest_point_sample(std::span<const Vec3>(line), 2, 0) == std::vector<int>{0, 3});

  Gen gen(1);
  const OrientedPointCloud cloud = as_cloud(gen.cloud(200, -1, 1));
  CHECK(farthest_point_sample(cloud, 20, 99) == farthest_point_sample(cloud, 20, 99));
  CHECK_THROWS_AS(farthest_point_sample(square, 5, 0), InvalidArgument);
}

TEST_CASE("farthest_point_sample follows the greedy max-min rule") {
  Gen gen(2);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<Vec3> pts = gen.cloud(gen.integer(10, 150), -1, 1);
    const int m = gen.integer(1, int(pts.size()));
    const int start = gen.integer(0, int(pts.size()) - 1);
    const std::vector<int> got = farthest_point_sample(std::span<const Vec3>(pts), m, start);
    REQUIRE(int(got.size()) == m);
    CHECK(got[0] == start);
    for (int s = 1; s < m; ++s) {
      // Oracle: recompute the max-min choice from scratch.
      int best = -1;
      double best_d = -1;
      for (int i = 0; i < int(pts.size()); ++i) {
        if (std::find(got.begin(), got.begin() + s, i) != got.begin() + s) continue;
        double d = 1e300;
        for (int q = 0; q < s; ++q) d = std::min(d, squared_distance(pts[i], pts[got[q]]));
        if (d > best_d) {
          best_d = d;
          best = i;
        }
      }
      CHECK(got[s] == best);
    }
  }
}

CodecConfig toy_config() { return CodecConfig{32, 12, 4096}; }

TEST_CASE("encode shape, permutation invariance and translation equivariance") {
  const CodecConfig cfg = toy_config();
  const TriangleMesh box = make_box({-0.6, -0.3, -0.5}, {0.4, 0.5, 0.2});
  OrientedPointCloud cloud = sample_surface(box, cfg.n_sample_points, 5);
  const LatentShapeCode code = encode(cloud, cfg);
  CHECK(code.m == 32);
  CHECK(code.width == 12);
  CHECK(code.data.size() == 32 * 12);
  CHECK(code.all_finite());
  for (int t = 0; t < code.m; ++t) {
    CHECK(code.at(t, 10) == 0.0f);
    CHECK(code.at(t, 11) == 0.0f);
  }

  Gen gen(3);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<int> perm(cloud.size());
    for (int i = 0; i < int(perm.size()); ++i) perm[i] = i;
    gen.shuffle(perm);
    OrientedPointCloud shuffled;
    for (int i : perm) {
      shuffled.points.push_back(cloud.points[i]);
      shuffled.normals.push_back(cloud.normals[i]);
    }
    CHECK(encode(shuffled, cfg) == code);
  }

  const Vec3 shift(0.25, -0.125, 0.5);
  OrientedPointCloud moved = cloud;
  for (Vec3& p : moved.points) p += shift;
  const LatentShapeCode mcode = encode(moved, cfg);
  for (int t = 0; t < code.m; ++t) {
    for (int c = 0; c < 3; ++c) CHECK(std::abs(mcode.at(t, c) - (code.at(t, c) + shift[c])) < 1e-5);
    for (int c = 3; c < kTokenFeatures; ++c) CHECK(std::abs(mcode.at(t, c) - code.at(t, c)) < 1e-5);
  }

  cloud.points.pop_back();
  cloud.normals.pop_back();
  CHECK_THROWS_AS(encode(cloud, cfg), InvalidArgument);
}

TEST_CASE("decode_sdf examples") {
  LatentShapeCode plane = LatentShapeCode::zeros(8, 12);
  const double xy[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {2, 2}, {-2, 2}, {2, -2}, {-2, -2}};
  for (int t = 0; t < 8; ++t) {
    plane.at(t, 0) = static_cast<float>(xy[t][0]);
    plane.at(t, 1) = static_cast<float>(xy[t][1]);
    plane.at(t, 5) = 1.0f;
  }
  CHECK(decode_sdf(plane, {0, 0, 0.5}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(decode_sdf(plane, {0, 0, -0.5}) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(std::abs(decode_sdf(plane, {1, 0, 0})) <= 1e-9);

  const CodecConfig cfg = toy_config();
  const LatentShapeCode code = encode(sample_surface(make_sphere({0, 0, 0}, 0.5, 16, 24), 4096, 1), cfg);
  for (int t = 0; t < code.m; ++t) CHECK(std::abs(decode_sdf(code, code.anchor(t))) <= 1e-9);
  CHECK(decode_sdf(code, {0, 0, 0}) < 0);
  CHECK(decode_sdf(code, {0.9, 0, 0}) > 0);
}

TEST_CASE("decode_sdf is Lipschitz up to blend slack") {
  const CodecConfig cfg = toy_config();
  const LatentShapeCode code =
      encode(sample_surface(make_box({-0.7, -0.4, -0.3}, {0.6, 0.5, 0.4}), 4096, 2), cfg);
  Gen gen(4);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec3 p = gen.vec(-1.1, 1.1);
    const Vec3 q = gen.coin() ? Vec3(p + gen.vec(-0.05, 0.05)) : gen.vec(-1.1, 1.1);
    CHECK(std::abs(decode_sdf(code, p) - decode_sdf(code, q)) <= (p - q).norm() + 0.05);
  }
}

TEST_CASE("encode/decode roundtrip fidelity on toy shapes") {
  const CodecConfig cfg = toy_config();
  Gen gen(12);
  for (int trial = 0; trial < 12; ++trial) {
    const Vec3 lo = gen.vec(-0.9, -0.3);
    Vec3 hi = lo + gen.vec(0.4, 1.2);
    double bound = 0.02;
    if (trial % 2 == 1) {
      // Thin panel: its narrow rim faces may own no anchor at M = 32, leaving
      // the rim up to half a thickness away from the nearest represented plane.
      const double thickness = gen.uniform(0.04, 0.12);
      hi[trial % 3] = lo[trial % 3] + thickness;
      bound = 0.02 + thickness / 2;
    }
    const TriangleMesh shape = make_box(lo, hi);
    const LatentShapeCode code = encode(sample_surface(shape, cfg.n_sample_points, 10 + trial), cfg);
    const OrientedPointCloud held_out = sample_surface(shape, 500, 100 + trial);
    double worst = 0, mean = 0;
    for (const Vec3& p : held_out.points) {
      const double e = std::abs(decode_sdf(code, p));
      worst = std::max(worst, e);
      mean += e / held_out.size();
    }
    CHECK(worst <= bound);
    CHECK(mean <= 0.02);
  }

  // Curved surfaces sag between tangent-plane anchors.
  const TriangleMesh cylinder = make_cylinder({0.1, 0, -0.6}, 0.4, 1.2, 32);
  const LatentShapeCode code = encode(sample_surface(cylinder, cfg.n_sample_points, 10), cfg);
  const OrientedPointCloud held_out = sample_surface(cylinder, 500, 11);
  double worst = 0, mean = 0;
  for (const Vec3& p : held_out.points) {
    const double e = std::abs(decode_sdf(code, p));
    worst = std::max(worst, e);
    mean += e / held_out.size();
  }
  CHECK(worst <= 0.05);
  CHECK(mean <= 0.02);
}

TEST_CASE("extract_mesh examples") {
  const CodecConfig cfg = toy_config();
  // Dense coding of a curved surface: plane anchors sag by about r * (1 - cos(spacing / 2r)).
  const CodecConfig dense{128, 12, 16384};
  const LatentShapeCode sphere =
      encode(sample_surface(make_sphere({0, 0, 0}, 0.5, 24, 48), dense.n_sample_points, 3), dense);
  const TriangleMesh ms = extract_mesh(sphere, 64);
  CHECK(is_watertight(ms));
  CHECK(signed_volume(ms) > 0);
  double worst = 0;
  for (const Vec3& v : ms.vertices) worst = std::max(worst, std::abs(v.norm() - 0.5));
  MESSAGE("sphere worst radial error = " << worst);
  CHECK(worst <= 0.05);

  const Vec3 lo(-0.7, -0.5, -0.6), hi(0.6, 0.4, 0.5);
  const LatentShapeCode box = encode(sample_surface(make_box(lo, hi), cfg.n_sample_points, 4), cfg);
  const int res = 64;
  const TriangleMesh mb = extract_mesh(box, res);
  CHECK(is_watertight(mb));
  const Aabb b = bounds(mb);
  const double cell = 2.2 / (res - 1);
  CHECK((b.min - lo).cwiseAbs().maxCoeff() <= 2 * cell);
  CHECK((b.max - hi).cwiseAbs().maxCoeff() <= 2 * cell);

  CHECK_THROWS_AS(extract_mesh(LatentShapeCode::zeros(32, 12), 32), EmptySurface);
  CHECK_THROWS_AS(extract_mesh(box, 8), InvalidArgument);
  const TriangleMesh again = extract_mesh(box, res);
  CHECK(again.vertices == mb.vertices);
  CHECK(again.triangles == mb.triangles);
}

TEST_CASE("LSC1 serialization") {
  const CodecConfig cfg = toy_config();
  const LatentShapeCode code = encode(sample_surface(make_box({-1, -1, -1}, {1, 1, 1}), 4096, 6), cfg);
  std::stringstream ss;
  write_lsc(ss, code);
  const std::string bytes = ss.str();
  CHECK(bytes.size() == 16 + 4 * 32 * 12);
  CHECK(bytes.substr(0, 4) == "LSC1");
  CHECK(static_cast<unsigned char>(bytes[4]) == 32);
  CHECK(static_cast<unsigned char>(bytes[8]) == 12);
  CHECK(read_lsc(ss) == code);

  std::stringstream junk("XXXX0000");
  CHECK_THROWS_AS(read_lsc(junk), IoError);
}

}  // namespace
}  // namespace urdfgen
