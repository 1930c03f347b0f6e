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


// Serial reference vs OpenMP kernels: wall time and agreement. For nearest
// and occupancy the reference is also a different algorithm (brute force scan,
// winding number), so the speedup is not a threading speedup alone.
//
//   kernels_bench [--quick] [--threads N] [--repeat R]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "CLI11.hpp"
#include "urdfgen/codec/codec.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/kernels/grid_eval.h"
#include "urdfgen/kernels/nearest.h"
#include "urdfgen/kernels/occupancy.h"

namespace {

using namespace urdfgen;

template <class F>
double best_seconds(int repeat, F&& f) {
  double best = 1e300;
  for (int r = 0; r < repeat; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, const char* agreement) {
  std::printf("%-22s serial %9.4f s  parallel %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, agreement);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmark"};
  bool quick = false;
  int threads = omp_get_max_threads();
  int repeat = 3;
  app.add_flag("--quick", quick, "small problem sizes");
  app.add_option("--threads", threads, "OpenMP threads for the parallel kernels");
  app.add_option("--repeat", repeat, "repetitions; the best time is reported");
  CLI11_PARSE(app, argc, argv);
  omp_set_num_threads(std::max(1, threads));
  std::printf("threads %d\n", std::max(1, threads));
  bool all_agree = true;

  {
    const int n = quick ? 2000 : 20000;
    const TriangleMesh sphere = make_sphere(Vec3::Zero(), 1.0, 24, 48);
    const auto q = sample_surface(sphere, n, 1).points;
    const auto r = sample_surface(sphere, n, 2).points;
    std::vector<double> a, b;
    const double ts = best_seconds(repeat, [&] { a = nearest_sq_distances_serial(q, r); });
    const double tp = best_seconds(repeat, [&] { b = nearest_sq_distances(q, r); });
    const bool same = a == b;
    all_agree = all_agree && same;
    char label[64];
    std::snprintf(label, sizeof(label), "nearest n=%d", n);
    row(label, ts, tp, same ? "bit-identical" : "MISMATCH");
  }
  {
    const int res = quick ? 16 : 40;
    const TriangleMesh mesh = make_sphere(Vec3(0.05, -0.02, 0.01), 0.8, 12, 24);
    GridSpec grid;
    grid.resolution = {res, res, res};
    grid.cell_size = 2.0 / res;
    grid.origin = Vec3::Constant(-1.0);
    VoxelGrid a, b;
    const double ts = best_seconds(repeat, [&] { a = occupancy_winding_serial(mesh, grid); });
    const double tp = best_seconds(repeat, [&] { b = occupancy_ray_parallel(mesh, grid); });
    std::size_t diff = 0;
    for (std::size_t i = 0; i < a.occupancy.size(); ++i) diff += a.occupancy[i] != b.occupancy[i];
    all_agree = all_agree && diff == 0;
    char label[64], agree[64];
    std::snprintf(label, sizeof(label), "occupancy res=%d", res);
    std::snprintf(agree, sizeof(agree), "%zu/%zu cells differ", diff, a.occupancy.size());
    row(label, ts, tp, agree);
  }
  {
    const int res = quick ? 24 : 64;
    CodecConfig cfg;
    const auto cloud = sample_surface(make_box({-0.5, -0.4, -0.3}, {0.5, 0.4, 0.3}), cfg.n_sample_points, 3);
    const SdfDecoder sdf(encode(cloud, cfg));
    NodeLattice lattice;
    lattice.count = {res, res, res};
    lattice.spacing = 2.2 / (res - 1);
    lattice.origin = Vec3::Constant(-1.1);
    std::vector<double> a, b;
    const double ts = best_seconds(repeat, [&] { a = evaluate_lattice_serial(lattice, sdf); });
    const double tp = best_seconds(repeat, [&] { b = evaluate_lattice_parallel(lattice, sdf); });
    const bool same = a == b;
    all_agree = all_agree && same;
    char label[64];
    std::snprintf(label, sizeof(label), "sdf lattice res=%d", res);
    row(label, ts, tp, same ? "bit-identical" : "MISMATCH");
  }
  return all_agree ? 0 : 1;
}
