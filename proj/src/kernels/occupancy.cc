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


#include "urdfgen/kernels/occupancy.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

namespace urdfgen {
namespace {

struct Point2 {
  double x, y;
};

bool lex_less(const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

// Edge function of p against the directed edge a->b. Evaluated with the
// endpoints in a canonical order so that two triangles sharing an edge get
// exactly negated values.
double edge_function(const Point2& a, const Point2& b, const Point2& p) {
  if (lex_less(b, a)) {
    return -((a.x - b.x) * (p.y - b.y) - (a.y - b.y) * (p.x - b.x));
  }
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

// Top-left rule for a counter-clockwise triangle: an edge owns the points lying
// exactly on it when it points "up-left".
bool owns_boundary(const Point2& a, const Point2& b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  return dy < 0 || (dy == 0 && dx > 0);
}

struct Crossing {
  double z;
  int sign;
};

}  // namespace

double winding_number(const TriangleMesh& mesh, const Vec3& q) {
  double total = 0;
  for (const Triangle& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[t[0]] - q;
    const Vec3 b = mesh.vertices[t[1]] - q;
    const Vec3 c = mesh.vertices[t[2]] - q;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double det = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    total += 2.0 * std::atan2(det, den);
  }
  return total / (4.0 * std::numbers::pi);
}

VoxelGrid occupancy_winding_serial(const TriangleMesh& mesh, const GridSpec& grid) {
  VoxelGrid out{grid, std::vector<std::uint8_t>(grid.cell_count(), 0)};
  for (int i = 0; i < grid.resolution[0]; ++i) {
    for (int j = 0; j < grid.resolution[1]; ++j) {
      for (int k = 0; k < grid.resolution[2]; ++k) {
        if (winding_number(mesh, grid.cell_center(i, j, k)) > 0.5) {
          out.occupancy[grid.index(i, j, k)] = 1;
        }
      }
    }
  }
  return out;
}

VoxelGrid occupancy_ray_parallel(const TriangleMesh& mesh, const GridSpec& grid) {
  const int nx = grid.resolution[0], ny = grid.resolution[1], nz = grid.resolution[2];
  VoxelGrid out{grid, std::vector<std::uint8_t>(grid.cell_count(), 0)};
  std::vector<std::vector<Crossing>> columns(static_cast<std::size_t>(nx) * ny);

  // Bin every triangle into the columns whose center its xy projection covers.
  for (const Triangle& t : mesh.triangles) {
    Vec3 v[3] = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
    Point2 p[3] = {{v[0].x(), v[0].y()}, {v[1].x(), v[1].y()}, {v[2].x(), v[2].y()}};
    const double area2 = edge_function(p[0], p[1], p[2]);
    if (area2 == 0) continue;
    const int sign = area2 > 0 ? 1 : -1;  // +1 when the triangle faces +z
    if (area2 < 0) {
      std::swap(p[1], p[2]);
      std::swap(v[1], v[2]);
    }
    const double xmin = std::min({p[0].x, p[1].x, p[2].x});
    const double xmax = std::max({p[0].x, p[1].x, p[2].x});
    const double ymin = std::min({p[0].y, p[1].y, p[2].y});
    const double ymax = std::max({p[0].y, p[1].y, p[2].y});
    const int i0 = std::max(0, static_cast<int>(std::floor((xmin - grid.origin.x()) / grid.cell_size - 0.5)));
    const int i1 = std::min(nx - 1, static_cast<int>(std::ceil((xmax - grid.origin.x()) / grid.cell_size - 0.5)));
    const int j0 = std::max(0, static_cast<int>(std::floor((ymin - grid.origin.y()) / grid.cell_size - 0.5)));
    const int j1 = std::min(ny - 1, static_cast<int>(std::ceil((ymax - grid.origin.y()) / grid.cell_size - 0.5)));
    const double area = edge_function(p[0], p[1], p[2]);
    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) {
        const Vec3 c = grid.cell_center(i, j, 0);
        const Point2 q{c.x(), c.y()};
        double w[3];
        bool inside = true;
        for (int e = 0; e < 3 && inside; ++e) {
          const Point2& a = p[(e + 1) % 3];
          const Point2& b = p[(e + 2) % 3];
          w[e] = edge_function(a, b, q);
          inside = w[e] > 0 || (w[e] == 0 && owns_boundary(a, b));
        }
        if (!inside) continue;
        const double z = (w[0] * v[0].z() + w[1] * v[1].z() + w[2] * v[2].z()) / area;
        columns[static_cast<std::size_t>(i) * ny + j].push_back({z, sign});
      }
    }
  }

  const long n_columns = static_cast<long>(columns.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long col = 0; col < n_columns; ++col) {
    std::vector<Crossing>& cs = columns[col];
    if (cs.empty()) continue;
    std::sort(cs.begin(), cs.end(), [](const Crossing& a, const Crossing& b) { return a.z < b.z; });
    const int i = static_cast<int>(col / ny);
    const int j = static_cast<int>(col % ny);
    // Walk cells bottom-up, dropping crossings that fall at or below the cell.
    int above = 0;
    for (const Crossing& c : cs) above += c.sign;
    std::size_t next = 0;
    for (int k = 0; k < nz; ++k) {
      const double zc = grid.cell_center(i, j, k).z();
      while (next < cs.size() && cs[next].z <= zc) above -= cs[next++].sign;
      if (above > 0) out.occupancy[grid.index(i, j, k)] = 1;
    }
  }
  return out;
}

}  // namespace urdfgen
