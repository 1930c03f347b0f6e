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


#ifndef URDFGEN_KERNELS_OCCUPANCY_H_
#define URDFGEN_KERNELS_OCCUPANCY_H_

#include "urdfgen/geometry/types.h"

namespace urdfgen {

// Generalized winding number of a closed triangle mesh around q: the summed
// signed solid angle of its triangles over 4*pi.
double winding_number(const TriangleMesh& mesh, const Vec3& q);

// Reference occupancy: a cell is occupied iff the winding number at its
// center exceeds 0.5. Serial, O(cells * triangles).
VoxelGrid occupancy_winding_serial(const TriangleMesh& mesh, const GridSpec& grid);

// Production occupancy: signed crossings of a +z ray from every cell center,
// accumulated per grid column. Parallel over columns. For closed, consistently
// oriented meshes the crossing sum equals the integer winding number, so the
// result matches the reference away from the surface.
VoxelGrid occupancy_ray_parallel(const TriangleMesh& mesh, const GridSpec& grid);

}  // namespace urdfgen

#endif  // URDFGEN_KERNELS_OCCUPANCY_H_
