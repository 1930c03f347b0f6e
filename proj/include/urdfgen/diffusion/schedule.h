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


#ifndef URDFGEN_DIFFUSION_SCHEDULE_H_
#define URDFGEN_DIFFUSION_SCHEDULE_H_

#include <vector>

#include <Eigen/Core>

namespace urdfgen {

using LatentMatrix = Eigen::MatrixXd;

inline constexpr int kDefaultDiffusionSteps = 1000;
inline constexpr double kCosineOffset = 0.008;

// Discrete schedule indexed t = 0..T with alpha_bar[0] = 1 (clean) and
// alpha_bar[T] close to 0 (pure noise).
struct NoiseSchedule {
  int T = 0;
  std::vector<double> alpha;      // alpha[0] = 1
  std::vector<double> alpha_bar;  // cumulative products

  static NoiseSchedule cosine(int steps = kDefaultDiffusionSteps, double offset = kCosineOffset);
  double at(int t) const;  // alpha_bar[t]; InvalidArgument outside [0, T]
};

// z_t = sqrt(ab) z0 + sqrt(1 - ab) eps.
LatentMatrix forward_noise(const LatentMatrix& z0, const LatentMatrix& eps, double alpha_bar);
// v = sqrt(ab) eps - sqrt(1 - ab) z0.
LatentMatrix velocity_target(const LatentMatrix& z0, const LatentMatrix& eps, double alpha_bar);
// z0 = sqrt(ab) z_t - sqrt(1 - ab) v.
LatentMatrix recover_z0(const LatentMatrix& z_t, const LatentMatrix& v, double alpha_bar);
// eps = sqrt(1 - ab) z_t + sqrt(ab) v.
LatentMatrix recover_eps(const LatentMatrix& z_t, const LatentMatrix& v, double alpha_bar);

inline LatentMatrix forward_noise(const LatentMatrix& z0, const LatentMatrix& eps, int t,
                                  const NoiseSchedule& s) {
  return forward_noise(z0, eps, s.at(t));
}
inline LatentMatrix velocity_target(const LatentMatrix& z0, const LatentMatrix& eps, int t,
                                    const NoiseSchedule& s) {
  return velocity_target(z0, eps, s.at(t));
}
inline LatentMatrix recover_z0(const LatentMatrix& z_t, const LatentMatrix& v, int t,
                               const NoiseSchedule& s) {
  return recover_z0(z_t, v, s.at(t));
}

}  // namespace urdfgen

#endif  // URDFGEN_DIFFUSION_SCHEDULE_H_
