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


#ifndef URDFGEN_KERNELS_GRID_EVAL_H_
#define URDFGEN_KERNELS_GRID_EVAL_H_

#include <array>
#include <vector>

#include "urdfgen/geometry/types.h"

namespace urdfgen {

// Regular lattice of sample nodes (not cells): node (i, j, k) sits at
// origin + spacing * (i, j, k).
struct NodeLattice {
  std::array<int, 3> count{0, 0, 0};
  Vec3 origin = Vec3::Zero();
  double spacing = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(count[0]) * count[1] * count[2]; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * count[1] + j) * count[2] + k;
  }
  Vec3 node(int i, int j, int k) const { return origin + spacing * Vec3(i, j, k); }
};

// Evaluates a scalar field at every lattice node.
template <class Field>
std::vector<double> evaluate_lattice_serial(const NodeLattice& lattice, const Field& field) {
  std::vector<double> values(lattice.size());
  for (int i = 0; i < lattice.count[0]; ++i)
    for (int j = 0; j < lattice.count[1]; ++j)
      for (int k = 0; k < lattice.count[2]; ++k)
        values[lattice.index(i, j, k)] = field(lattice.node(i, j, k));
  return values;
}

// Same values as the serial version; slabs of constant i run in parallel.
// `field` must be safe to call concurrently.
template <class Field>
std::vector<double> evaluate_lattice_parallel(const NodeLattice& lattice, const Field& field) {
  std::vector<double> values(lattice.size());
  const int nx = lattice.count[0];
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < lattice.count[1]; ++j)
      for (int k = 0; k < lattice.count[2]; ++k)
        values[lattice.index(i, j, k)] = field(lattice.node(i, j, k));
  return values;
}

}  // namespace urdfgen

#endif  // URDFGEN_KERNELS_GRID_EVAL_H_
