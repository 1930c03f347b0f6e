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


#ifndef URDFGEN_DIFFUSION_SAMPLER_H_
#define URDFGEN_DIFFUSION_SAMPLER_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "urdfgen/diffusion/schedule.h"

namespace urdfgen {

inline constexpr int kDefaultSamplingSteps = 50;

// Predicted velocity for latent z_t at schedule step t.
using VelocityFn = std::function<LatentMatrix(const LatentMatrix& z_t, int t)>;

LatentMatrix standard_normal(int rows, int cols, std::uint64_t seed);

// Descending visit times T = t_0 > t_1 > ... > t_{steps-1} >= 1, uniformly
// spaced; the final step lands on t = 0.
std::vector<int> sampling_times(const NoiseSchedule& sched, int steps);

// Deterministic reverse process from z_T ~ N(0, I) (seeded): at each visit
// time form z0_hat from the predicted velocity, the implied noise, and step to
// the next time. InvalidArgument unless 1 <= steps <= T.
LatentMatrix sample_reverse(const VelocityFn& velocity, int rows, int cols, const NoiseSchedule& sched,
                            int steps, std::uint64_t seed);

}  // namespace urdfgen

#endif  // URDFGEN_DIFFUSION_SAMPLER_H_
