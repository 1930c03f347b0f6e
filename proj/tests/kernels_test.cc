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

#include "doctest.h"
#include "test_util.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/geometry/sdf.h"
#include "urdfgen/kernels/grid_eval.h"
#include "urdfgen/kernels/nearest.h"
#include "urdfgen/kernels/occupancy.h"

namespace urdfgen {
namespace {

using testing::Gen;

TEST_CASE("kd-tree nearest distances equal the brute-force scan bit-for-bit") {
  Gen gen(1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec3> ref = gen.cloud(gen.integer(1, 600), -1, 1);
    // Duplicates and grid-aligned points exercise ties.
    for (int d = 0; d < 20; ++d) ref.push_back(ref[gen.integer(0, int(ref.size()) - 1)]);
    for (int d = 0; d < 20; ++d) ref.emplace_back(gen.integer(-2, 2) * 0.5, 0.0, gen.integer(-2, 2) * 0.5);
    const std::vector<Vec3> q = gen.cloud(gen.integer(1, 400), -1.5, 1.5);
    CHECK(nearest_sq_distances(q, ref) == nearest_sq_distances_serial(q, ref));
  }
}

TEST_CASE("kd-tree knn equals sorted brute force with index tie-break") {
  Gen gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec3> ref;
    for (int i = 0; i < 300; ++i) ref.emplace_back(gen.integer(0, 5), gen.integer(0, 5), gen.integer(0, 5));
    const KdTree tree(ref);
    for (int rep = 0; rep < 20; ++rep) {
      const Vec3 q(gen.integer(0, 10) * 0.5, gen.integer(0, 10) * 0.5, gen.integer(0, 10) * 0.5);
      const int k = gen.integer(1, 40);
      std::vector<Neighbor> brute;
      for (int i = 0; i < int(ref.size()); ++i) brute.push_back({i, squared_distance(q, ref[i])});
      std::sort(brute.begin(), brute.end(), [](const Neighbor& a, const Neighbor& b) {
        return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.index < b.index);
      });
      const std::vector<Neighbor> got = tree.knn(q, k);
      REQUIRE(int(got.size()) == k);
      for (int i = 0; i < k; ++i) {
        CHECK(got[i].index == brute[i].index);
        CHECK(got[i].sq_dist == brute[i].sq_dist);
      }
      const Neighbor nn = tree.nearest(q);
      CHECK(nn.index == brute[0].index);
    }
  }
}

TEST_CASE("ray-crossing occupancy equals the winding-number reference") {
  Gen gen(3);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<TriangleMesh> parts;
    const Mat3 r = gen.rotation();
    TriangleMesh box = make_box(gen.vec(-0.9, -0.2), gen.vec(0.2, 0.9));
    for (Vec3& v : box.vertices) v = r * v * 0.9;
    parts.push_back(box);
    parts.push_back(make_sphere(gen.vec(-0.3, 0.3), gen.uniform(0.1, 0.4), 8, 12));
    const TriangleMesh mesh = merge_meshes(parts);
    GridSpec grid;
    grid.resolution = {gen.integer(8, 20), gen.integer(8, 20), gen.integer(8, 20)};
    grid.origin = gen.vec(-1.3, -1.1);
    grid.cell_size = gen.uniform(0.08, 0.14);
    CHECK(occupancy_ray_parallel(mesh, grid).occupancy ==
          occupancy_winding_serial(mesh, grid).occupancy);
  }
}

TEST_CASE("ray-crossing occupancy is exact when centers hit shared edges") {
  // Cell centers fall on the face diagonals of this cube.
  const TriangleMesh cube = make_box({-1, -1, -1}, {1, 1, 1});
  GridSpec grid;
  grid.resolution = {16, 16, 16};
  grid.origin = Vec3::Constant(-1.0);
  grid.cell_size = 0.125;
  CHECK(occupancy_ray_parallel(cube, grid).occupied_count() == 4096);
  CHECK(occupancy_winding_serial(cube, grid).occupied_count() == 4096);
}

TEST_CASE("lattice evaluation is identical serial and parallel") {
  const TriangleMesh sphere = make_sphere({0.1, 0, 0}, 0.7, 8, 12);
  const MeshSdf sdf(sphere);
  NodeLattice lattice{{9, 7, 8}, Vec3(-1, -1, -1), 0.25};
  CHECK(evaluate_lattice_parallel(lattice, sdf) == evaluate_lattice_serial(lattice, sdf));
}

}  // namespace
}  // namespace urdfgen
