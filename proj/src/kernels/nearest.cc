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


#include "urdfgen/kernels/nearest.h"

#include <algorithm>
#include <limits>
#include <numeric>

namespace urdfgen {
namespace {

constexpr int kLeafSize = 8;

bool closer(const Neighbor& a, const Neighbor& b) {
  return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.index < b.index);
}

}  // namespace

KdTree::KdTree(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build(0, static_cast<int>(points_.size()), 0);
  }
}

int KdTree::build(int begin, int end, int depth) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end, -1, -1, -1, 0.0});
  if (end - begin <= kLeafSize) return id;

  Aabb box;
  for (int i = begin; i < end; ++i) box.extend(points_[order_[i]]);
  int axis = 0;
  box.extent().maxCoeff(&axis);
  const int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     const double pa = points_[a][axis], pb = points_[b][axis];
                     return pa < pb || (pa == pb && a < b);
                   });
  const double split = points_[order_[mid]][axis];
  const int left = build(begin, mid, depth + 1);
  const int right = build(mid, end, depth + 1);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::search_nearest(int node_id, const Vec3& q, Neighbor& best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      const Neighbor cand{order_[i], squared_distance(q, points_[order_[i]])};
      if (closer(cand, best)) best = cand;
    }
    return;
  }
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double diff = q[node.axis] - node.split;
  const int near = diff <= 0 ? node.left : node.right;
  const int far = diff <= 0 ? node.right : node.left;
  search_nearest(near, q, best);
  if (diff * diff <= best.sq_dist) search_nearest(far, q, best);
}

void KdTree::search_knn(int node_id, const Vec3& q, int k, std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      const Neighbor cand{order_[i], squared_distance(q, points_[order_[i]])};
      if (static_cast<int>(heap.size()) < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), closer);
      } else if (closer(cand, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), closer);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), closer);
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const int near = diff <= 0 ? node.left : node.right;
  const int far = diff <= 0 ? node.right : node.left;
  search_knn(near, q, k, heap);
  if (static_cast<int>(heap.size()) < k || diff * diff <= heap.front().sq_dist) {
    search_knn(far, q, k, heap);
  }
}

Neighbor KdTree::nearest(const Vec3& query) const {
  Neighbor best{-1, std::numeric_limits<double>::infinity()};
  if (!nodes_.empty()) search_nearest(0, query, best);
  return best;
}

std::vector<Neighbor> KdTree::knn(const Vec3& query, int k) const {
  std::vector<Neighbor> heap;
  if (k <= 0 || nodes_.empty()) return heap;
  heap.reserve(k);
  search_knn(0, query, k, heap);
  std::sort_heap(heap.begin(), heap.end(), closer);
  return heap;
}

std::vector<double> nearest_sq_distances_serial(std::span<const Vec3> queries,
                                                std::span<const Vec3> reference) {
  std::vector<double> out(queries.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec3& r : reference) best = std::min(best, squared_distance(queries[i], r));
    out[i] = best;
  }
  return out;
}

std::vector<Neighbor> nearest_neighbors(std::span<const Vec3> queries, const KdTree& tree) {
  std::vector<Neighbor> out(queries.size());
  const long n = static_cast<long>(queries.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = tree.nearest(queries[i]);
  return out;
}

std::vector<double> nearest_sq_distances(std::span<const Vec3> queries,
                                         std::span<const Vec3> reference) {
  const KdTree tree(reference);
  std::vector<double> out(queries.size(), std::numeric_limits<double>::infinity());
  if (tree.empty()) return out;
  const long n = static_cast<long>(queries.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = tree.nearest(queries[i]).sq_dist;
  return out;
}

}  // namespace urdfgen
