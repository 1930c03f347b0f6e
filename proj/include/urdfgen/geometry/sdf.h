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


#ifndef URDFGEN_GEOMETRY_SDF_H_
#define URDFGEN_GEOMETRY_SDF_H_

#include <span>
#include <vector>

#include "urdfgen/geometry/types.h"

namespace urdfgen {

// Closest point to p on triangle (a, b, c), by Voronoi-region classification.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Distance from p to the nearest point of any triangle.
double unsigned_distance(const TriangleMesh& mesh, const Vec3& p);

// Exact signed distance: unsigned distance to the surface, negative where
// the generalized winding number exceeds 0.5. Throws InvalidMesh for
// non-watertight input.
double mesh_sdf(const TriangleMesh& mesh, const Vec3& query);

// Validates the mesh once and then answers many queries.
class MeshSdf {
 public:
  explicit MeshSdf(TriangleMesh mesh);
  double operator()(const Vec3& query) const;
  const TriangleMesh& mesh() const { return mesh_; }

 private:
  TriangleMesh mesh_;
};

}  // namespace urdfgen

#endif  // URDFGEN_GEOMETRY_SDF_H_
