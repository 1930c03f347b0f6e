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

#ifndef URDFGEN_GEOMETRY_MESH_H_
#define URDFGEN_GEOMETRY_MESH_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "urdfgen/geometry/types.h"

namespace urdfgen {

// Default shell half-thickness applied to open surfaces, in normalized units.
inline constexpr double kDefaultThickeningOffset = 0.005;

Aabb bounds(const TriangleMesh& mesh);
Aabb bounds(std::span<const Vec3> points);

// Throws InvalidMesh on out-of-range indices or triangles that repeat a vertex.
void check_indices(const TriangleMesh& mesh);

double triangle_area(const TriangleMesh& mesh, int tri);
// Unit normal following the right-hand rule; zero for degenerate triangles.
Vec3 triangle_normal(const TriangleMesh& mesh, int tri);
double surface_area(const TriangleMesh& mesh);
// Volume enclosed by a closed, consistently oriented mesh (positive when the
// triangles face outward).
double signed_volume(const TriangleMesh& mesh);

// Half-edge style audit over undirected edges.
struct EdgeAudit {
  int boundary_edges = 0;      // used by exactly one triangle
  int nonmanifold_edges = 0;   // used by three or more triangles
  int inconsistent_edges = 0;  // two uses with the same direction

  bool closed() const {
    return boundary_edges == 0 && nonmanifold_edges == 0 && inconsistent_edges == 0;
  }
  bool manifold_consistent() const {
    return nonmanifold_edges == 0 && inconsistent_edges == 0;
  }
};
EdgeAudit audit_edges(const TriangleMesh& mesh);
inline bool is_watertight(const TriangleMesh& mesh) {
  return !mesh.empty() && audit_edges(mesh).closed();
}

TriangleMesh transform_mesh(const TriangleMesh& mesh, const SimilarityTransform& t);

// Uniformly rescales and recenters so the Aabb center is the origin and the
// largest half-extent is 1. The returned transform maps input coordinates to
// normalized coordinates.
std::pair<TriangleMesh, SimilarityTransform> normalize_to_unit_cube(const TriangleMesh& mesh);
// The transform normalize_to_unit_cube would use for a mesh with these bounds.
SimilarityTransform unit_cube_transform(const Aabb& box);

// Turns an open single-layer surface into a closed shell of thickness
// 2 * offset by offsetting along vertex normals both ways and stitching the
// boundary. Closed inputs are returned unchanged.
TriangleMesh thicken_mesh(const TriangleMesh& mesh, double offset = kDefaultThickeningOffset);

// Area-weighted uniform surface samples; each normal is the normal of the
// triangle the point was drawn from.
OrientedPointCloud sample_surface(const TriangleMesh& mesh, int n, std::uint64_t seed);

// Concatenation with index offsetting.
TriangleMesh merge_meshes(std::span<const TriangleMesh> meshes);

// Axis-aligned box as a closed, outward-oriented 8-vertex / 12-triangle mesh.
TriangleMesh make_box(const Vec3& min, const Vec3& max);
// Closed cylinder along +z.
TriangleMesh make_cylinder(const Vec3& base_center, double radius, double height, int segments);
// Closed UV sphere.
TriangleMesh make_sphere(const Vec3& center, double radius, int rings, int segments);

}  // namespace urdfgen

#endif  // URDFGEN_GEOMETRY_MESH_H_
