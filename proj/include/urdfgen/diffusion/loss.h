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


#ifndef URDFGEN_DIFFUSION_LOSS_H_
#define URDFGEN_DIFFUSION_LOSS_H_

#include <optional>
#include <span>
#include <vector>

#include "urdfgen/diffusion/denoiser.h"

namespace urdfgen {

inline constexpr double kEotLossWeight = 0.1;
inline constexpr double kJointLossWeight = 0.01;

enum class TrainStage { kStage1, kStage2 };

struct LossWeights {
  double eot = kEotLossWeight;
  double joint = kJointLossWeight;
};

// L = L_diff + w_eot * L_EOT + w_joint * L_joint.
inline double total_loss(double l_diff, double l_eot, double l_joint, const LossWeights& w = {}) {
  return l_diff + w.eot * l_eot + w.joint * l_joint;
}

struct JointTarget {
  Vec3 origin = Vec3::Zero();
  Vec3 axis = Vec3::UnitZ();
  JointType type = JointType::kFixed;
  double lower = 0.0;
  double upper = 0.0;

  static JointTarget from(const JointSpec& j) { return {j.origin, j.axis, j.type, j.lower, j.upper}; }
};

// L1 norm of the origin residual after removing its component along the
// predicted axis direction.
double masked_origin_l1(const Vec3& predicted, const Vec3& target, const Vec3& predicted_axis);

// Joint loss on the tape: masked origin L1 + L1 between the normalized
// predicted axis and the target axis (skipped for fixed joints) + L1 on
// (lower, upper) (limited types only) + cross-entropy on the type logits.
ad::Var joint_loss(ad::Tape& tape, const HeadVars& heads, const JointTarget& target);
// Same from plain head outputs.
double joint_loss(const Vec3& origin, const Vec3& axis_raw, const Eigen::Vector2d& limits,
                  const Eigen::VectorXd& logits, const JointTarget& target);

// One supervised generation step in model space.
struct TrainingExample {
  LatentMatrix z0;  // target latent; zero for the terminal (EoT) step
  ModelCondition cond;
  std::optional<JointTarget> joint;
  bool eot = false;
};

struct NoiseDraw {
  int t = 1;
  LatentMatrix eps;
};

struct LossBreakdown {
  double diff = 0.0;   // mean over the batch
  double eot = 0.0;    // mean over terminal examples (0 if none)
  double joint = 0.0;  // mean over examples with a joint (0 if none)
  double total = 0.0;
};

// Batch objective for fixed noise draws. Stage 1 uses L_diff alone; stage 2
// adds the terminal and joint terms, both read from z0_hat recovered from the
// predicted velocity. With `grads` non-null (aligned with the parameters)
// the exact gradient of `total` is added into it. Examples are evaluated in
// parallel and reduced in index order.
LossBreakdown batch_loss(const Denoiser& model, const NoiseSchedule& sched,
                         std::span<const TrainingExample> batch, std::span<const NoiseDraw> noise,
                         TrainStage stage, const LossWeights& weights, std::vector<ad::Matrix>* grads);

}  // namespace urdfgen

#endif  // URDFGEN_DIFFUSION_LOSS_H_
