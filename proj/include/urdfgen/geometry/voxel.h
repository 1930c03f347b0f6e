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


#ifndef URDFGEN_GEOMETRY_VOXEL_H_
#define URDFGEN_GEOMETRY_VOXEL_H_

#include "urdfgen/geometry/types.h"

namespace urdfgen {

// resolution^3 cells tiling [-1, 1]^3.
GridSpec unit_cube_grid(int resolution);

// Grid with cubic cells covering `box`; the longest axis gets `resolution`
// cells and the others as many as needed to cover their extent.
GridSpec covering_grid(const Aabb& box, int resolution);

// Marks each cell whose center lies inside the mesh. The mesh must be
// watertight with nonzero enclosed volume; flat surfaces must be thickened
// first. Throws InvalidMesh otherwise.
VoxelGrid voxelize(const TriangleMesh& mesh, int resolution);
VoxelGrid voxelize(const TriangleMesh& mesh, const GridSpec& grid);

// Occupied-cell intersection over union of two watertight meshes on a shared
// covering grid of their joint bounds. Returns 0 when both are empty.
double voxel_iou(const TriangleMesh& a, const TriangleMesh& b, int resolution);

}  // namespace urdfgen

#endif  // URDFGEN_GEOMETRY_VOXEL_H_
