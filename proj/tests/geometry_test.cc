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
#include <map>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "test_util.h"
#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/geometry/obj_io.h"
#include "urdfgen/geometry/sdf.h"
#include "urdfgen/geometry/voxel.h"

namespace urdfgen {
namespace {

using testing::Gen;

TriangleMesh unit_square() {
  TriangleMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  m.triangles = {{0, 1, 2}, {0, 2, 3}};
  return m;
}

// Open heightfield patch with consistent winding.
TriangleMesh random_patch(Gen& gen, int nx, int ny) {
  TriangleMesh m;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      m.vertices.emplace_back(i * 0.1, j * 0.1, gen.uniform(-0.02, 0.02));
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const int a = j * nx + i, b = a + 1, c = a + nx + 1, d = a + nx;
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  }
  return m;
}

int euler_characteristic(const TriangleMesh& m) {
  std::map<std::pair<int, int>, int> edges;
  for (const Triangle& t : m.triangles)
    for (int c = 0; c < 3; ++c) edges[std::minmax(t[c], t[(c + 1) % 3])]++;
  return static_cast<int>(m.vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(m.triangles.size());
}

// Triangles as sorted position triples, for comparisons independent of indexing.
std::vector<std::array<std::tuple<double, double, double>, 3>> canonical(const TriangleMesh& m) {
  std::vector<std::array<std::tuple<double, double, double>, 3>> out;
  for (const Triangle& t : m.triangles) {
    std::array<std::tuple<double, double, double>, 3> tri;
    for (int c = 0; c < 3; ++c) {
      const Vec3& v = m.vertices[t[c]];
      tri[c] = {v.x(), v.y(), v.z()};
    }
    std::rotate(tri.begin(), std::min_element(tri.begin(), tri.end()), tri.end());
    out.push_back(tri);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST_CASE("normalize_to_unit_cube examples") {
  auto [cube, t] = normalize_to_unit_cube(make_box({0, 0, 0}, {2, 2, 2}));
  CHECK(t.scale == 1.0);
  CHECK((t.translation - Vec3(-1, -1, -1)).norm() == 0.0);
  const Aabb b = bounds(cube);
  CHECK((b.min - Vec3(-1, -1, -1)).norm() == 0.0);
  CHECK((b.max - Vec3(1, 1, 1)).norm() == 0.0);

  auto [slab, t2] = normalize_to_unit_cube(make_box({0, 0, 0}, {2, 1, 1}));
  const Aabb b2 = bounds(slab);
  CHECK((b2.min - Vec3(-1, -0.5, -0.5)).norm() < 1e-15);
  CHECK((b2.max - Vec3(1, 0.5, 0.5)).norm() < 1e-15);

  auto [again, t3] = normalize_to_unit_cube(cube);
  CHECK(t3.scale == 1.0);
  CHECK(t3.translation.norm() == 0.0);
  for (std::size_t i = 0; i < cube.vertices.size(); ++i) CHECK(again.vertices[i] == cube.vertices[i]);

  CHECK_THROWS_AS(normalize_to_unit_cube(TriangleMesh{}), InvalidMesh);
}

TEST_CASE("normalize_to_unit_cube is idempotent and maps by its transform") {
  Gen gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    TriangleMesh m;
    m.vertices = gen.cloud(gen.integer(3, 40), -5, 7);
    for (std::size_t i = 0; i + 2 < m.vertices.size(); i += 3)
      m.triangles.push_back({int(i), int(i + 1), int(i + 2)});
    auto [once, t] = normalize_to_unit_cube(m);
    auto [twice, t2] = normalize_to_unit_cube(once);
    const Aabb b = bounds(once);
    CHECK(b.center().norm() < 1e-12);
    CHECK(std::abs(0.5 * b.extent().maxCoeff() - 1.0) < 1e-12);
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
      CHECK((once.vertices[i] - twice.vertices[i]).norm() <= 1e-9);
      CHECK((t.apply(m.vertices[i]) - once.vertices[i]).norm() == 0.0);
      CHECK(once.vertices[i].cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("thicken_mesh closes a unit square") {
  const TriangleMesh shell = thicken_mesh(unit_square(), 0.01);
  CHECK(shell.vertices.size() == 8);
  CHECK(is_watertight(shell));
  CHECK(euler_characteristic(shell) == 2);
  for (const Vec3& v : shell.vertices) CHECK(std::abs(std::abs(v.z()) - 0.01) < 1e-15);
  CHECK(signed_volume(shell) == doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("thicken_mesh passes closed meshes through and rejects bad input") {
  const TriangleMesh cube = make_box({-1, -1, -1}, {1, 1, 1});
  const TriangleMesh out = thicken_mesh(cube, 0.3);
  CHECK(out.vertices == cube.vertices);
  CHECK(out.triangles == cube.triangles);
  CHECK_THROWS_AS(thicken_mesh(unit_square(), 0.0), ThickeningFailed);
  CHECK_THROWS_AS(thicken_mesh(unit_square(), -0.1), ThickeningFailed);

  TriangleMesh bad = unit_square();
  bad.triangles[1] = {0, 3, 2};  // flipped: shared edge 0-2 used twice in one direction
  CHECK_THROWS_AS(thicken_mesh(bad, 0.01), ThickeningFailed);

  TriangleMesh fin = unit_square();
  fin.vertices.emplace_back(0.5, 0.5, 1.0);
  fin.triangles.push_back({0, 2, 4});  // third triangle on edge 0-2
  CHECK_THROWS_AS(thicken_mesh(fin, 0.01), ThickeningFailed);
}

TEST_CASE("thicken_mesh output is watertight for random open patches") {
  Gen gen(5);
  for (int trial = 0; trial < 30; ++trial) {
    const TriangleMesh patch = random_patch(gen, gen.integer(2, 8), gen.integer(2, 8));
    const TriangleMesh shell = thicken_mesh(patch, gen.uniform(0.001, 0.01));
    CHECK(is_watertight(shell));
    CHECK(euler_characteristic(shell) == 2);
    CHECK(signed_volume(shell) > 0);
  }
}

TEST_CASE("sample_surface examples") {
  const TriangleMesh cube = make_box({-1, -1, -1}, {1, 1, 1});
  const OrientedPointCloud cloud = sample_surface(cube, 6000, 123);
  REQUIRE(cloud.size() == 6000);
  // Each face is identified by which coordinate sits at +-1.
  std::map<std::pair<int, int>, int> counts;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    int axis = 0;
    cloud.normals[i].cwiseAbs().maxCoeff(&axis);
    counts[{axis, cloud.normals[i][axis] > 0 ? 1 : -1}]++;
    CHECK(std::abs(std::abs(cloud.points[i][axis]) - 1.0) < 1e-12);
    CHECK(std::abs(cloud.normals[i].norm() - 1.0) < 1e-12);
    CHECK(cloud.normals[i].dot(cloud.points[i]) > 0);  // outward
  }
  const double sigma = std::sqrt(6000.0 * (1.0 / 6) * (5.0 / 6));
  REQUIRE(counts.size() == 6);
  for (const auto& [face, c] : counts) CHECK(std::abs(c - 1000) <= 3 * sigma);

  TriangleMesh tri;
  tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  tri.triangles = {{0, 1, 2}};
  const OrientedPointCloud three = sample_surface(tri, 3, 9);
  for (std::size_t i = 0; i < 3; ++i) {
    const Vec3& p = three.points[i];
    CHECK(p.z() == 0.0);
    CHECK(p.x() >= 0);
    CHECK(p.y() >= 0);
    CHECK(p.x() + p.y() <= 1 + 1e-15);
    CHECK(three.normals[i] == Vec3(0, 0, 1));
  }

  const OrientedPointCloud again = sample_surface(cube, 6000, 123);
  CHECK(again.points == cloud.points);
  CHECK(again.normals == cloud.normals);

  TriangleMesh flat;
  flat.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  flat.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(sample_surface(flat, 10, 1), InvalidMesh);
}

TEST_CASE("sample_surface points lie on the surface") {
  Gen gen(3);
  const TriangleMesh sphere = make_sphere(gen.vec(-0.2, 0.2), 0.6, 12, 16);
  const MeshSdf sdf(sphere);
  const OrientedPointCloud cloud = sample_surface(sphere, 300, 77);
  for (const Vec3& p : cloud.points) CHECK(std::abs(sdf(p)) <= 1e-6);
}

TEST_CASE("merge_meshes") {
  const TriangleMesh a = make_box({0, 0, 0}, {1, 1, 1});
  const TriangleMesh b = make_box({2, 0, 0}, {3, 1, 1});
  const TriangleMesh c = make_cylinder({5, 0, 0}, 0.5, 1.0, 12);
  const TriangleMesh single = merge_meshes(std::vector<TriangleMesh>{a});
  CHECK(single.vertices == a.vertices);
  CHECK(single.triangles == a.triangles);

  const TriangleMesh ab = merge_meshes(std::vector<TriangleMesh>{a, b});
  CHECK(ab.vertices.size() == 16);
  CHECK(ab.triangles.size() == 24);
  CHECK_THROWS_AS(merge_meshes(std::vector<TriangleMesh>{}), InvalidMesh);

  const OrientedPointCloud cloud = sample_surface(ab, 500, 4);
  for (const Vec3& p : cloud.points) {
    CHECK(std::min(unsigned_distance(a, p), unsigned_distance(b, p)) <= 1e-9);
  }

  const TriangleMesh left = merge_meshes(std::vector<TriangleMesh>{ab, c});
  const TriangleMesh right =
      merge_meshes(std::vector<TriangleMesh>{a, merge_meshes(std::vector<TriangleMesh>{b, c})});
  CHECK(canonical(left) == canonical(right));
}

TEST_CASE("voxelize examples") {
  CHECK(voxelize(make_box({-1, -1, -1}, {1, 1, 1}), 16).occupied_count() == 4096);
  CHECK(voxelize(make_box({-1, -1, -1}, {0, 1, 1}), 16).occupied_count() == 2048);
  // Sliver between two layers of cell centers.
  CHECK(voxelize(make_box({-0.5, -0.5, 0.01}, {0.5, 0.5, 0.05}), 16).occupied_count() == 0);
  CHECK_THROWS_AS(voxelize(unit_square(), 16), InvalidMesh);
  CHECK_THROWS_AS(voxelize(make_box({-1, -1, -1}, {1, 1, 1}), 4), InvalidArgument);
  TriangleMesh flat = make_box({-1, -1, 0}, {1, 1, 0});
  CHECK_THROWS_AS(voxelize(flat, 16), InvalidMesh);
}

TEST_CASE("voxelize IoU against the analytic box converges") {
  Gen gen(8);
  for (int res : {16, 32, 64}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Vec3 ext = gen.vec(1.2, 2.0);
      const Vec3 lo = -Vec3::Ones() + gen.uniform(0, 1) * (Vec3::Constant(2.0) - ext);
      const Vec3 hi = lo + ext;
      const VoxelGrid grid = voxelize(make_box(lo, hi), res);
      const double cell = grid.grid.cell_size;
      double inter = 0;
      for (int i = 0; i < res; ++i)
        for (int j = 0; j < res; ++j)
          for (int k = 0; k < res; ++k) {
            if (!grid.occupied(i, j, k)) continue;
            const Vec3 c = grid.grid.cell_center(i, j, k);
            inter += testing::box_intersection_volume(c - Vec3::Constant(cell / 2),
                                                      c + Vec3::Constant(cell / 2), lo, hi);
          }
      const double vox = grid.occupied_count() * cell * cell * cell;
      const double exact = testing::box_volume(lo, hi);
      CHECK(1.0 - inter / (vox + exact - inter) <= 3.0 / res);
    }
  }
}

TEST_CASE("voxel_iou of box pairs") {
  const TriangleMesh a = make_box({0, 0, 0}, {1, 1, 1});
  const TriangleMesh b = make_box({0.5, 0, 0}, {1.5, 1, 1});
  CHECK(voxel_iou(a, a, 32) == 1.0);
  CHECK(voxel_iou(a, make_box({3, 3, 3}, {4, 4, 4}), 32) == 0.0);
  for (int res : {32, 64, 128}) CHECK(std::abs(voxel_iou(a, b, res) - 1.0 / 3) <= 3.0 / res);
}

TEST_CASE("mesh_sdf examples") {
  const TriangleMesh cube = make_box({-1, -1, -1}, {1, 1, 1});
  CHECK(mesh_sdf(cube, {0, 0, 0}) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(mesh_sdf(cube, {2, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(mesh_sdf(cube, {1, 0.3, -0.2})) <= 1e-9);
  CHECK_THROWS_AS(mesh_sdf(unit_square(), {0, 0, 0}), InvalidMesh);
}

TEST_CASE("mesh_sdf matches the closed-form box distance") {
  Gen gen(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 lo = gen.vec(-1, 0), hi = lo + gen.vec(0.2, 1.5);
    const MeshSdf sdf(make_box(lo, hi));
    for (int q = 0; q < 50; ++q) {
      const Vec3 p = gen.vec(-2, 2);
      CHECK(std::abs(sdf(p) - testing::box_sdf(lo, hi, p)) <= 1e-12);
    }
  }
}

TEST_CASE("closest_point_on_triangle agrees with dense barycentric search") {
  Gen gen(2);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec3 a = gen.vec(-1, 1), b = gen.vec(-1, 1), c = gen.vec(-1, 1), p = gen.vec(-2, 2);
    const double fast = (p - closest_point_on_triangle(p, a, b, c)).norm();
    double brute = 1e300;
    const int n = 300;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) {
        const double u = double(i) / n, v = double(j) / n;
        brute = std::min(brute, (p - (a + u * (b - a) + v * (c - a))).norm());
      }
    CHECK(fast <= brute + 1e-12);
    CHECK(brute - fast <= 0.02);
  }
}

TEST_CASE("OBJ roundtrip and parsing") {
  const TriangleMesh cube = make_box({-0.123456789012, 0, 0}, {1, 2, 3});
  std::stringstream ss;
  write_obj(ss, cube);
  const TriangleMesh back = read_obj(ss);
  REQUIRE(back.vertices.size() == 8);
  CHECK(back.triangles == cube.triangles);
  for (std::size_t i = 0; i < 8; ++i) CHECK((back.vertices[i] - cube.vertices[i]).norm() < 1e-9);

  std::stringstream quad("# comment\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1 4//1\nf -4 -3 -1\n");
  const TriangleMesh q = read_obj(quad);
  CHECK(q.triangles.size() == 3);
  CHECK(q.triangles[0] == Triangle{0, 1, 2});
  CHECK(q.triangles[1] == Triangle{0, 2, 3});
  CHECK(q.triangles[2] == Triangle{0, 1, 3});

  std::stringstream broken("v 0 0 0\nf 1 2 3\n");
  CHECK_THROWS_AS(read_obj(broken), InvalidMesh);
  CHECK_THROWS_AS(read_obj(std::filesystem::path("/nonexistent/x.obj")), IoError);
}

TEST_CASE("similarity transform algebra") {
  Gen gen(4);
  for (int trial = 0; trial < 20; ++trial) {
    SimilarityTransform a{gen.rotation(), gen.vec(-1, 1), gen.uniform(0.5, 2)};
    SimilarityTransform b{gen.rotation(), gen.vec(-1, 1), gen.uniform(0.5, 2)};
    const Vec3 x = gen.vec(-1, 1);
    CHECK((a.compose(b).apply(x) - a.apply(b.apply(x))).norm() < 1e-12);
    CHECK((a.inverse().apply(a.apply(x)) - x).norm() < 1e-12);
    const Eigen::Vector4d h = a.matrix() * x.homogeneous();
    CHECK((h.head<3>() - a.apply(x)).norm() < 1e-12);
  }
}

TEST_CASE("primitive builders are closed and outward") {
  for (const TriangleMesh& m : {make_box({0, 0, 0}, {1, 2, 3}), make_cylinder({0, 0, 0}, 1, 2, 24),
                                make_sphere({0, 0, 0}, 1, 10, 20)}) {
    CHECK(is_watertight(m));
    CHECK(signed_volume(m) > 0);
  }
  CHECK(signed_volume(make_box({0, 0, 0}, {1, 2, 3})) == doctest::Approx(6.0));
}

}  // namespace
}  // namespace urdfgen
