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


#include "urdfgen/geometry/sdf.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/kernels/occupancy.h"

namespace urdfgen {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double unsigned_distance(const TriangleMesh& mesh, const Vec3& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Triangle& t : mesh.triangles) {
    const Vec3 q = closest_point_on_triangle(p, mesh.vertices[t[0]], mesh.vertices[t[1]],
                                             mesh.vertices[t[2]]);
    best = std::min(best, (p - q).squaredNorm());
  }
  return std::sqrt(best);
}

MeshSdf::MeshSdf(TriangleMesh mesh) : mesh_(std::move(mesh)) {
  check_indices(mesh_);
  if (!is_watertight(mesh_)) throw InvalidMesh("signed distance requires a watertight mesh");
}

double MeshSdf::operator()(const Vec3& query) const {
  const double d = unsigned_distance(mesh_, query);
  return winding_number(mesh_, query) > 0.5 ? -d : d;
}

double mesh_sdf(const TriangleMesh& mesh, const Vec3& query) {
  return MeshSdf(mesh)(query);
}

}  // namespace urdfgen
