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


#include "urdfgen/diffusion/schedule.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "urdfgen/common/error.h"

namespace urdfgen {
namespace {

void check_shapes(const LatentMatrix& a, const LatentMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument(std::string(op) + ": shape mismatch");
  }
}

void check_alpha_bar(double ab, const char* op) {
  if (!(ab >= 0.0 && ab <= 1.0)) throw InvalidArgument(std::string(op) + ": alpha_bar outside [0, 1]");
}

}  // namespace

NoiseSchedule NoiseSchedule::cosine(int steps, double offset) {
  if (steps < 1) throw InvalidArgument("NoiseSchedule: need at least one step");
  auto f = [&](double t) {
    const double c = std::cos((t / steps + offset) / (1.0 + offset) * std::numbers::pi / 2);
    return c * c;
  };
  NoiseSchedule s;
  s.T = steps;
  s.alpha.assign(steps + 1, 1.0);
  s.alpha_bar.assign(steps + 1, 1.0);
  for (int t = 1; t <= steps; ++t) {
    // Per-step alpha floored at 0.001 so the last steps stay finite.
    s.alpha[t] = std::max(f(t) / f(t - 1), 0.001);
    s.alpha_bar[t] = s.alpha_bar[t - 1] * s.alpha[t];
  }
  return s;
}

double NoiseSchedule::at(int t) const {
  if (t < 0 || t > T) throw InvalidArgument("NoiseSchedule: step " + std::to_string(t) + " out of range");
  return alpha_bar[t];
}

LatentMatrix forward_noise(const LatentMatrix& z0, const LatentMatrix& eps, double ab) {
  check_shapes(z0, eps, "forward_noise");
  check_alpha_bar(ab, "forward_noise");
  return std::sqrt(ab) * z0 + std::sqrt(1.0 - ab) * eps;
}

LatentMatrix velocity_target(const LatentMatrix& z0, const LatentMatrix& eps, double ab) {
  check_shapes(z0, eps, "velocity_target");
  check_alpha_bar(ab, "velocity_target");
  return std::sqrt(ab) * eps - std::sqrt(1.0 - ab) * z0;
}

LatentMatrix recover_z0(const LatentMatrix& z_t, const LatentMatrix& v, double ab) {
  check_shapes(z_t, v, "recover_z0");
  check_alpha_bar(ab, "recover_z0");
  return std::sqrt(ab) * z_t - std::sqrt(1.0 - ab) * v;
}

LatentMatrix recover_eps(const LatentMatrix& z_t, const LatentMatrix& v, double ab) {
  check_shapes(z_t, v, "recover_eps");
  check_alpha_bar(ab, "recover_eps");
  return std::sqrt(1.0 - ab) * z_t + std::sqrt(ab) * v;
}

}  // namespace urdfgen
