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


#ifndef URDFGEN_KERNELS_NEAREST_H_
#define URDFGEN_KERNELS_NEAREST_H_

#include <span>
#include <utility>
#include <vector>

#include "urdfgen/geometry/types.h"

namespace urdfgen {

// Squared Euclidean distance, always evaluated as dx*dx + dy*dy + dz*dz so
// every search path produces bit-identical values.
inline double squared_distance(const Vec3& a, const Vec3& b) {
  const double dx = a.x() - b.x();
  const double dy = a.y() - b.y();
  const double dz = a.z() - b.z();
  return dx * dx + dy * dy + dz * dz;
}

struct Neighbor {
  int index = -1;
  double sq_dist = 0.0;
};

// Static 3-d tree over a point set. Ties in distance resolve to the lowest
// point index, so results do not depend on the tree layout.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Vec3> points);

  bool empty() const { return points_.empty(); }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<Vec3>& points() const { return points_; }

  Neighbor nearest(const Vec3& query) const;
  // k nearest, sorted by (distance, index). Returns min(k, size()) entries.
  std::vector<Neighbor> knn(const Vec3& query, int k) const;

 private:
  struct Node {
    int begin = 0, end = 0;  // range into order_
    int left = -1, right = -1;
    int axis = -1;           // -1 for leaves
    double split = 0.0;
  };

  int build(int begin, int end, int depth);
  void search_nearest(int node, const Vec3& q, Neighbor& best) const;
  void search_knn(int node, const Vec3& q, int k, std::vector<Neighbor>& heap) const;

  std::vector<Vec3> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

// Reference: O(|queries| * |reference|) scan, serial.
std::vector<double> nearest_sq_distances_serial(std::span<const Vec3> queries,
                                                std::span<const Vec3> reference);
// Kd-tree search, parallel over queries. Bit-identical to the serial scan.
std::vector<double> nearest_sq_distances(std::span<const Vec3> queries,
                                         std::span<const Vec3> reference);
std::vector<Neighbor> nearest_neighbors(std::span<const Vec3> queries, const KdTree& tree);

}  // namespace urdfgen

#endif  // URDFGEN_KERNELS_NEAREST_H_
