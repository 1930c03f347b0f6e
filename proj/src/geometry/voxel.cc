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


#include "urdfgen/geometry/voxel.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/kernels/occupancy.h"

namespace urdfgen {
namespace {

void require_solid(const TriangleMesh& mesh) {
  check_indices(mesh);
  if (!is_watertight(mesh)) throw InvalidMesh("voxelization requires a watertight mesh");
  if (std::abs(signed_volume(mesh)) <= 1e-12) {
    throw InvalidMesh("mesh encloses no volume; thicken flat surfaces first");
  }
}

}  // namespace

GridSpec unit_cube_grid(int resolution) {
  GridSpec grid;
  grid.resolution = {resolution, resolution, resolution};
  grid.origin = Vec3::Constant(-1.0);
  grid.cell_size = 2.0 / resolution;
  return grid;
}

GridSpec covering_grid(const Aabb& box, int resolution) {
  if (resolution < 1) throw InvalidArgument("grid resolution must be positive");
  if (!box.valid()) throw InvalidArgument("cannot build a grid over an empty box");
  const Vec3 ext = box.extent();
  double longest = ext.maxCoeff();
  if (!(longest > 0)) longest = 1.0;
  GridSpec grid;
  grid.cell_size = longest / resolution;
  grid.origin = box.min;
  for (int a = 0; a < 3; ++a) {
    grid.resolution[a] =
        std::clamp(static_cast<int>(std::ceil(ext[a] / grid.cell_size - 1e-9)), 1, resolution);
  }
  return grid;
}

VoxelGrid voxelize(const TriangleMesh& mesh, int resolution) {
  if (resolution < 8) {
    throw InvalidArgument("voxel resolution must be at least 8, got " + std::to_string(resolution));
  }
  return voxelize(mesh, unit_cube_grid(resolution));
}

VoxelGrid voxelize(const TriangleMesh& mesh, const GridSpec& grid) {
  require_solid(mesh);
  return occupancy_ray_parallel(mesh, grid);
}

double voxel_iou(const TriangleMesh& a, const TriangleMesh& b, int resolution) {
  require_solid(a);
  require_solid(b);
  Aabb box = bounds(a);
  box.extend(bounds(b));
  const GridSpec grid = covering_grid(box, resolution);
  const VoxelGrid va = occupancy_ray_parallel(a, grid);
  const VoxelGrid vb = occupancy_ray_parallel(b, grid);
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < va.occupancy.size(); ++i) {
    inter += va.occupancy[i] & vb.occupancy[i];
    uni += va.occupancy[i] | vb.occupancy[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace urdfgen
