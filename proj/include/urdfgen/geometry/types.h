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

#ifndef URDFGEN_GEOMETRY_TYPES_H_
#define URDFGEN_GEOMETRY_TYPES_H_

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace urdfgen {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Triangle = std::array<int, 3>;

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<Triangle> triangles;

  bool empty() const { return vertices.empty() || triangles.empty(); }
};

// Surface samples with one unit normal per point.
struct OrientedPointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;

  std::size_t size() const { return points.size(); }
};

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  bool valid() const { return (min.array() <= max.array()).all(); }
  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Aabb& other) {
    min = min.cwiseMin(other.min);
    max = max.cwiseMax(other.max);
  }
};

// x -> scale * rotation * x + translation.
struct SimilarityTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double scale = 1.0;

  static SimilarityTransform identity() { return {}; }

  Vec3 apply(const Vec3& x) const { return scale * (rotation * x) + translation; }
  // Linear part only (no translation); used for direction-like offsets.
  Vec3 apply_linear(const Vec3& x) const { return scale * (rotation * x); }

  SimilarityTransform inverse() const;
  // (*this) o other: applies `other` first.
  SimilarityTransform compose(const SimilarityTransform& other) const;
  Eigen::Matrix4d matrix() const;
};

// Regular grid of cubic cells with centers at origin + (i + 0.5) * cell_size.
struct GridSpec {
  std::array<int, 3> resolution{0, 0, 0};
  Vec3 origin = Vec3::Zero();
  double cell_size = 0.0;

  std::size_t cell_count() const {
    return static_cast<std::size_t>(resolution[0]) * resolution[1] * resolution[2];
  }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * resolution[1] + j) * resolution[2] + k;
  }
  Vec3 cell_center(int i, int j, int k) const {
    return origin + cell_size * Vec3(i + 0.5, j + 0.5, k + 0.5);
  }
};

struct VoxelGrid {
  GridSpec grid;
  std::vector<std::uint8_t> occupancy;  // one byte per cell, 0 or 1

  std::size_t occupied_count() const;
  bool occupied(int i, int j, int k) const { return occupancy[grid.index(i, j, k)] != 0; }
};

}  // namespace urdfgen

#endif  // URDFGEN_GEOMETRY_TYPES_H_
