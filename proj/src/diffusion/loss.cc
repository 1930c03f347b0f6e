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


#include "urdfgen/diffusion/loss.h"

#include <cmath>

#include "urdfgen/common/error.h"

namespace urdfgen {

using ad::Matrix;
using ad::Var;

namespace {

Matrix row(const Vec3& v) { return v.transpose(); }

}  // namespace

double masked_origin_l1(const Vec3& predicted, const Vec3& target, const Vec3& predicted_axis) {
  const Vec3 a = predicted_axis.normalized();
  const Vec3 r = predicted - target;
  return (r - r.dot(a) * a).cwiseAbs().sum();
}

Var joint_loss(ad::Tape& tape, const HeadVars& heads, const JointTarget& target) {
  Var axis = tape.normalize(heads.axis_raw);
  Var residual = tape.sub(heads.origin, tape.constant(row(target.origin)));
  Var loss = tape.sum_abs(tape.reject(residual, axis));
  if (target.type != JointType::kFixed) {
    loss = tape.add(loss, tape.sum_abs(tape.sub(axis, tape.constant(row(target.axis)))));
  }
  if (has_limits(target.type)) {
    Matrix lim(1, 2);
    lim << target.lower, target.upper;
    loss = tape.add(loss, tape.sum_abs(tape.sub(heads.limits, tape.constant(lim))));
  }
  return tape.add(loss, tape.cross_entropy(heads.logits, static_cast<int>(target.type)));
}

double joint_loss(const Vec3& origin, const Vec3& axis_raw, const Eigen::Vector2d& limits,
                  const Eigen::VectorXd& logits, const JointTarget& target) {
  ad::Tape tape;
  HeadVars h{tape.constant(row(origin)), tape.constant(row(axis_raw)), tape.constant(limits.transpose()),
             tape.constant(logits.transpose())};
  return tape.scalar(joint_loss(tape, h, target));
}

LossBreakdown batch_loss(const Denoiser& model, const NoiseSchedule& sched,
                         std::span<const TrainingExample> batch, std::span<const NoiseDraw> noise,
                         TrainStage stage, const LossWeights& weights, std::vector<Matrix>* grads) {
  const int n = static_cast<int>(batch.size());
  if (n == 0) throw InvalidArgument("batch_loss: empty batch");
  if (noise.size() != batch.size()) throw InvalidArgument("batch_loss: one noise draw per example");
  const bool full = stage == TrainStage::kStage2;
  int n_eot = 0, n_joint = 0;
  for (const TrainingExample& ex : batch) {
    n_eot += ex.eot;
    n_joint += ex.joint.has_value();
  }
  const double w_diff = 1.0 / n;
  const double w_eot = full && n_eot ? weights.eot / n_eot : 0.0;
  const double w_joint = full && n_joint ? weights.joint / n_joint : 0.0;

  struct Part {
    double diff = 0, eot = 0, joint = 0;
    std::vector<Matrix> grads;
    std::string error;
  };
  std::vector<Part> parts(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      const TrainingExample& ex = batch[i];
      const NoiseDraw& nd = noise[i];
      const double ab = sched.at(nd.t);
      Part& part = parts[i];
      if (grads) part.grads = model.params().zeros_like();
      std::vector<Matrix>* g = grads ? &part.grads : nullptr;

      ad::Tape tape;
      const LatentMatrix z_t = forward_noise(ex.z0, nd.eps, ab);
      Var zt = tape.constant(z_t);
      Var v_hat = model.velocity(tape, g, zt, nd.t, ex.cond);
      Var l_diff = tape.mean_square(tape.sub(v_hat, tape.constant(velocity_target(ex.z0, nd.eps, ab))));
      part.diff = tape.scalar(l_diff);
      Var objective = tape.scale(l_diff, w_diff);
      if (full && (ex.eot || ex.joint)) {
        Var z0_hat = tape.add(tape.constant(std::sqrt(ab) * z_t), tape.scale(v_hat, -std::sqrt(1.0 - ab)));
        if (ex.eot) {
          Var l_eot = tape.mean_square(z0_hat);
          part.eot = tape.scalar(l_eot);
          objective = tape.add(objective, tape.scale(l_eot, w_eot));
        }
        if (ex.joint) {
          Var l_joint = joint_loss(tape, model.heads(tape, g, z0_hat), *ex.joint);
          part.joint = tape.scalar(l_joint);
          objective = tape.add(objective, tape.scale(l_joint, w_joint));
        }
      }
      if (g) tape.backward(objective);
    } catch (const std::exception& e) {
      parts[i].error = e.what();
    }
  }

  LossBreakdown out;
  for (int i = 0; i < n; ++i) {
    if (!parts[i].error.empty()) throw InvalidArgument("batch_loss: " + parts[i].error);
    out.diff += parts[i].diff;
    out.eot += parts[i].eot;
    out.joint += parts[i].joint;
    if (grads) {
      for (std::size_t k = 0; k < grads->size(); ++k) (*grads)[k] += parts[i].grads[k];
    }
  }
  out.diff /= n;
  out.eot = n_eot ? out.eot / n_eot : 0.0;
  out.joint = n_joint ? out.joint / n_joint : 0.0;
  out.total = full ? total_loss(out.diff, out.eot, out.joint, weights) : out.diff;
  return out;
}

}  // namespace urdfgen
