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


#include "urdfgen/diffusion/sampler.h"

#include <cmath>
#include <random>

#include "urdfgen/common/error.h"

namespace urdfgen {

LatentMatrix standard_normal(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  LatentMatrix z(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) z(r, c) = normal(engine);
  }
  return z;
}

std::vector<int> sampling_times(const NoiseSchedule& sched, int steps) {
  if (steps < 1 || steps > sched.T) throw InvalidArgument("sample_reverse: steps must lie in [1, T]");
  std::vector<int> times(steps);
  for (int i = 0; i < steps; ++i) {
    times[i] = static_cast<int>(static_cast<long long>(sched.T) * (steps - i) / steps);
  }
  return times;
}

LatentMatrix sample_reverse(const VelocityFn& velocity, int rows, int cols, const NoiseSchedule& sched,
                            int steps, std::uint64_t seed) {
  const std::vector<int> times = sampling_times(sched, steps);
  LatentMatrix z = standard_normal(rows, cols, seed);
  for (int i = 0; i < steps; ++i) {
    const int t = times[i];
    const int next = i + 1 < steps ? times[i + 1] : 0;
    const double ab = sched.at(t);
    const LatentMatrix v = velocity(z, t);
    if (v.rows() != rows || v.cols() != cols) throw InvalidArgument("sample_reverse: velocity shape mismatch");
    const LatentMatrix z0 = recover_z0(z, v, ab);
    const LatentMatrix eps = (z - std::sqrt(ab) * z0) / std::sqrt(1.0 - ab);
    const double ab_next = sched.at(next);
    z = std::sqrt(ab_next) * z0 + std::sqrt(1.0 - ab_next) * eps;
  }
  return z;
}

}  // namespace urdfgen
