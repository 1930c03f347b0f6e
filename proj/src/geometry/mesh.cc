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

#include "urdfgen/geometry/mesh.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>

#include "urdfgen/common/error.h"

namespace urdfgen {
namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

// Flips triangles of a convex closed mesh so they face away from its centroid.
void orient_outward_convex(TriangleMesh& mesh) {
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& v : mesh.vertices) centroid += v;
  centroid /= static_cast<double>(mesh.vertices.size());
  for (Triangle& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const Vec3 n = (b - a).cross(c - a);
    if (n.dot((a + b + c) / 3.0 - centroid) < 0) std::swap(t[1], t[2]);
  }
}

}  // namespace

SimilarityTransform SimilarityTransform::inverse() const {
  SimilarityTransform inv;
  inv.rotation = rotation.transpose();
  inv.scale = 1.0 / scale;
  inv.translation = -inv.scale * (inv.rotation * translation);
  return inv;
}

SimilarityTransform SimilarityTransform::compose(const SimilarityTransform& other) const {
  SimilarityTransform out;
  out.rotation = rotation * other.rotation;
  out.scale = scale * other.scale;
  out.translation = scale * (rotation * other.translation) + translation;
  return out;
}

Eigen::Matrix4d SimilarityTransform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = scale * rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

std::size_t VoxelGrid::occupied_count() const {
  return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), 1));
}

Aabb bounds(std::span<const Vec3> points) {
  Aabb box;
  for (const Vec3& p : points) box.extend(p);
  return box;
}

Aabb bounds(const TriangleMesh& mesh) { return bounds(std::span<const Vec3>(mesh.vertices)); }

void check_indices(const TriangleMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const Triangle& t = mesh.triangles[i];
    for (int c = 0; c < 3; ++c) {
      if (t[c] < 0 || t[c] >= n) {
        throw InvalidMesh("triangle " + std::to_string(i) + " references vertex " +
                          std::to_string(t[c]) + " out of range");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw InvalidMesh("triangle " + std::to_string(i) + " repeats a vertex");
    }
  }
}

double triangle_area(const TriangleMesh& mesh, int tri) {
  const Triangle& t = mesh.triangles[tri];
  const Vec3& a = mesh.vertices[t[0]];
  return 0.5 * (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a).norm();
}

Vec3 triangle_normal(const TriangleMesh& mesh, int tri) {
  const Triangle& t = mesh.triangles[tri];
  const Vec3& a = mesh.vertices[t[0]];
  const Vec3 n = (mesh.vertices[t[1]] - a).cross(mesh.vertices[t[2]] - a);
  const double len = n.norm();
  return len > 0 ? Vec3(n / len) : Vec3::Zero();
}

double surface_area(const TriangleMesh& mesh) {
  double total = 0;
  for (int i = 0; i < static_cast<int>(mesh.triangles.size()); ++i) total += triangle_area(mesh, i);
  return total;
}

double signed_volume(const TriangleMesh& mesh) {
  double six_v = 0;
  for (const Triangle& t : mesh.triangles) {
    six_v += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  }
  return six_v / 6.0;
}

EdgeAudit audit_edges(const TriangleMesh& mesh) {
  struct Use {
    int count = 0;
    int forward = 0;  // uses running from the lower to the higher index
  };
  std::unordered_map<std::uint64_t, Use> edges;
  edges.reserve(mesh.triangles.size() * 3);
  for (const Triangle& t : mesh.triangles) {
    for (int c = 0; c < 3; ++c) {
      const int a = t[c];
      const int b = t[(c + 1) % 3];
      Use& u = edges[edge_key(a, b)];
      ++u.count;
      if (a < b) ++u.forward;
    }
  }
  EdgeAudit audit;
  for (const auto& [key, u] : edges) {
    if (u.count == 1) {
      ++audit.boundary_edges;
    } else if (u.count > 2) {
      ++audit.nonmanifold_edges;
    } else if (u.forward != 1) {
      ++audit.inconsistent_edges;
    }
  }
  return audit;
}

TriangleMesh transform_mesh(const TriangleMesh& mesh, const SimilarityTransform& t) {
  TriangleMesh out = mesh;
  for (Vec3& v : out.vertices) v = t.apply(v);
  return out;
}

SimilarityTransform unit_cube_transform(const Aabb& box) {
  const Vec3 half = 0.5 * box.extent();
  const double h = half.maxCoeff();
  if (!(h > 0) || !std::isfinite(h)) throw InvalidMesh("mesh has degenerate extent");
  SimilarityTransform t;
  t.scale = 1.0 / h;
  t.translation = -t.scale * box.center();
  return t;
}

std::pair<TriangleMesh, SimilarityTransform> normalize_to_unit_cube(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw InvalidMesh("cannot normalize an empty mesh");
  const SimilarityTransform t = unit_cube_transform(bounds(mesh));
  return {transform_mesh(mesh, t), t};
}

TriangleMesh thicken_mesh(const TriangleMesh& mesh, double offset) {
  if (!(offset > 0) || !std::isfinite(offset)) {
    throw ThickeningFailed("thickening offset must be positive, got " + std::to_string(offset));
  }
  if (mesh.empty()) throw ThickeningFailed("cannot thicken an empty mesh");
  check_indices(mesh);
  const EdgeAudit audit = audit_edges(mesh);
  if (audit.closed()) return mesh;
  if (!audit.manifold_consistent()) {
    throw ThickeningFailed("surface is non-manifold or inconsistently wound (" +
                           std::to_string(audit.nonmanifold_edges) + " non-manifold, " +
                           std::to_string(audit.inconsistent_edges) + " inconsistent edges)");
  }

  // Compact to referenced vertices and accumulate area-weighted normals.
  const int n_in = static_cast<int>(mesh.vertices.size());
  std::vector<int> remap(n_in, -1);
  std::vector<Vec3> positions;
  for (const Triangle& t : mesh.triangles) {
    for (int v : t) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(positions.size());
        positions.push_back(mesh.vertices[v]);
      }
    }
  }
  const int n = static_cast<int>(positions.size());
  std::vector<Vec3> normals(n, Vec3::Zero());
  std::vector<Triangle> tris;
  tris.reserve(mesh.triangles.size());
  for (const Triangle& t : mesh.triangles) {
    const Triangle r{remap[t[0]], remap[t[1]], remap[t[2]]};
    const Vec3 w = (positions[r[1]] - positions[r[0]]).cross(positions[r[2]] - positions[r[0]]);
    for (int v : r) normals[v] += w;
    tris.push_back(r);
  }
  for (int i = 0; i < n; ++i) {
    const double len = normals[i].norm();
    if (!(len > 0)) throw ThickeningFailed("vertex " + std::to_string(i) + " has no normal");
    normals[i] /= len;
  }

  TriangleMesh out;
  out.vertices.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    out.vertices[i] = positions[i] + offset * normals[i];
    out.vertices[n + i] = positions[i] - offset * normals[i];
  }
  for (const Triangle& t : tris) out.triangles.push_back(t);
  for (const Triangle& t : tris) out.triangles.push_back({n + t[0], n + t[2], n + t[1]});

  // Directed edges without a reverse twin are on the boundary.
  std::unordered_map<std::uint64_t, int> directed;
  for (const Triangle& t : tris) {
    for (int c = 0; c < 3; ++c) {
      const auto a = static_cast<std::uint64_t>(t[c]);
      const auto b = static_cast<std::uint64_t>(t[(c + 1) % 3]);
      directed[(a << 32) | b] = 1;
    }
  }
  for (const Triangle& t : tris) {
    for (int c = 0; c < 3; ++c) {
      const int a = t[c];
      const int b = t[(c + 1) % 3];
      const std::uint64_t twin = (static_cast<std::uint64_t>(b) << 32) | static_cast<std::uint64_t>(a);
      if (directed.count(twin)) continue;
      out.triangles.push_back({b, a, n + a});
      out.triangles.push_back({b, n + a, n + b});
    }
  }
  return out;
}

OrientedPointCloud sample_surface(const TriangleMesh& mesh, int n, std::uint64_t seed) {
  if (n <= 0) throw InvalidArgument("sample count must be positive");
  check_indices(mesh);
  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    total += triangle_area(mesh, static_cast<int>(i));
    cumulative[i] = total;
  }
  if (!(total > 0)) throw InvalidMesh("mesh has zero surface area");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  OrientedPointCloud cloud;
  cloud.points.reserve(n);
  cloud.normals.reserve(n);
  for (int s = 0; s < n; ++s) {
    const double r = uniform(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    if (it == cumulative.end()) --it;
    while (it != cumulative.begin() && *it == *(it - 1)) --it;  // never land on zero-area
    const int tri = static_cast<int>(it - cumulative.begin());
    const Triangle& t = mesh.triangles[tri];
    const double r1 = std::sqrt(uniform(rng));
    const double r2 = uniform(rng);
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    cloud.points.push_back((1 - r1) * a + r1 * (1 - r2) * b + r1 * r2 * c);
    cloud.normals.push_back(triangle_normal(mesh, tri));
  }
  return cloud;
}

TriangleMesh merge_meshes(std::span<const TriangleMesh> meshes) {
  if (meshes.empty()) throw InvalidMesh("nothing to merge");
  TriangleMesh out;
  for (const TriangleMesh& m : meshes) {
    const int base = static_cast<int>(out.vertices.size());
    out.vertices.insert(out.vertices.end(), m.vertices.begin(), m.vertices.end());
    for (const Triangle& t : m.triangles) {
      out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
  }
  return out;
}

TriangleMesh make_box(const Vec3& min, const Vec3& max) {
  TriangleMesh mesh;
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 2; ++i) {
        mesh.vertices.emplace_back(i ? max.x() : min.x(), j ? max.y() : min.y(),
                                   k ? max.z() : min.z());
      }
    }
  }
  // Vertex index = i + 2j + 4k; each quad is listed cyclically.
  const int quads[6][4] = {{0, 2, 6, 4}, {1, 3, 7, 5}, {0, 1, 5, 4},
                           {2, 3, 7, 6}, {0, 1, 3, 2}, {4, 5, 7, 6}};
  for (const auto& q : quads) {
    mesh.triangles.push_back({q[0], q[1], q[2]});
    mesh.triangles.push_back({q[0], q[2], q[3]});
  }
  orient_outward_convex(mesh);
  return mesh;
}

TriangleMesh make_cylinder(const Vec3& base_center, double radius, double height, int segments) {
  TriangleMesh mesh;
  for (int level = 0; level < 2; ++level) {
    for (int s = 0; s < segments; ++s) {
      const double a = 2 * std::numbers::pi * s / segments;
      mesh.vertices.push_back(base_center +
                              Vec3(radius * std::cos(a), radius * std::sin(a), level * height));
    }
  }
  const int bottom = static_cast<int>(mesh.vertices.size());
  mesh.vertices.push_back(base_center);
  mesh.vertices.push_back(base_center + Vec3(0, 0, height));
  const int top = bottom + 1;
  for (int s = 0; s < segments; ++s) {
    const int s1 = (s + 1) % segments;
    mesh.triangles.push_back({s, s1, segments + s1});
    mesh.triangles.push_back({s, segments + s1, segments + s});
    mesh.triangles.push_back({bottom, s1, s});
    mesh.triangles.push_back({top, segments + s, segments + s1});
  }
  orient_outward_convex(mesh);
  return mesh;
}

TriangleMesh make_sphere(const Vec3& center, double radius, int rings, int segments) {
  TriangleMesh mesh;
  mesh.vertices.push_back(center + Vec3(0, 0, radius));
  for (int r = 1; r < rings; ++r) {
    const double phi = std::numbers::pi * r / rings;
    for (int s = 0; s < segments; ++s) {
      const double theta = 2 * std::numbers::pi * s / segments;
      mesh.vertices.push_back(center + radius * Vec3(std::sin(phi) * std::cos(theta),
                                                     std::sin(phi) * std::sin(theta),
                                                     std::cos(phi)));
    }
  }
  const int south = static_cast<int>(mesh.vertices.size());
  mesh.vertices.push_back(center - Vec3(0, 0, radius));
  auto ring = [&](int r, int s) { return 1 + (r - 1) * segments + (s % segments); };
  for (int s = 0; s < segments; ++s) {
    mesh.triangles.push_back({0, ring(1, s), ring(1, s + 1)});
    mesh.triangles.push_back({south, ring(rings - 1, s + 1), ring(rings - 1, s)});
  }
  for (int r = 1; r + 1 < rings; ++r) {
    for (int s = 0; s < segments; ++s) {
      mesh.triangles.push_back({ring(r, s), ring(r + 1, s), ring(r + 1, s + 1)});
      mesh.triangles.push_back({ring(r, s), ring(r + 1, s + 1), ring(r, s + 1)});
    }
  }
  orient_outward_convex(mesh);
  return mesh;
}

}  // namespace urdfgen
