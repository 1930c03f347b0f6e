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


#ifndef URDFGEN_DIFFUSION_DENOISER_H_
#define URDFGEN_DIFFUSION_DENOISER_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "urdfgen/codec/codec.h"
#include "urdfgen/dataset/condition.h"
#include "urdfgen/diffusion/schedule.h"
#include "urdfgen/diffusion/tape.h"
#include "urdfgen/urdf/model.h"

namespace urdfgen {

struct DenoiserConfig {
  int tokens = 32;        // latent tokens M
  int latent_width = 12;  // channels per latent token
  int image_width = 0;    // channels per image feature token; 0 disables the stream
  int width = 128;
  int blocks = 4;
  int heads = 4;
  int mlp_ratio = 4;
  int head_hidden = 64;
  double stats_sharpness = 8.0;  // smooth max/min pooling in the heads

  void validate() const;  // InvalidArgument
  bool operator==(const DenoiserConfig&) const = default;
};

struct Param {
  std::string name;
  std::string group;
  ad::Matrix value;
};

class ParamStore {
 public:
  int add(std::string name, std::string group, ad::Matrix init);
  int size() const { return static_cast<int>(items_.size()); }
  Param& operator[](int i) { return items_[i]; }
  const Param& operator[](int i) const { return items_[i]; }
  int find(const std::string& name) const;  // -1 when absent
  std::vector<std::string> groups() const;  // first-appearance order
  std::vector<ad::Matrix> zeros_like() const;
  long long scalar_count() const;

 private:
  std::vector<Param> items_;
};

// Per-channel RMS of the training latents; the model works on code / scale.
struct LatentScaling {
  Eigen::RowVectorXd scale;

  static LatentScaling identity(int width);
  LatentMatrix to_model(const LatentShapeCode& code) const;
  LatentShapeCode to_code(const LatentMatrix& z) const;
};

// Model-space conditioning (whole and context tokens already scaled).
struct ModelCondition {
  LatentMatrix whole;
  std::optional<LatentMatrix> image;
  std::optional<LatentMatrix> context;
};
ModelCondition to_model(const ConditionSet& cond, const LatentScaling& scaling);

struct HeadVars {
  ad::Var origin;    // 1 x 3
  ad::Var axis_raw;  // 1 x 3, unnormalized
  ad::Var limits;    // 1 x 2
  ad::Var logits;    // 1 x kJointTypeCount
};

struct JointCandidate {
  JointSpec joint;  // axis normalized, limits ordered, parent unset (0)
  Vec3 raw_origin;
  Vec3 raw_axis;
  Eigen::Vector2d raw_limits;
  Eigen::VectorXd logits;
};

// Token transformer with adaLN-Zero conditioning on the step: per block
// self-attention over latent tokens, cross-attention over the concatenated
// condition streams (each tagged with a learned stream embedding) and an MLP.
// The output projection starts at zero. Four small MLP heads read pooled
// statistics of a shared latent.
class Denoiser {
 public:
  Denoiser(const DenoiserConfig& cfg, std::uint64_t seed);

  const DenoiserConfig& config() const { return cfg_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }

  // Gradients flow into `grads` (aligned with params(), null for none).
  ad::Var velocity(ad::Tape& tape, std::vector<ad::Matrix>* grads, ad::Var z_t, int t,
                   const ModelCondition& cond) const;
  HeadVars heads(ad::Tape& tape, std::vector<ad::Matrix>* grads, ad::Var z_shared) const;

  LatentMatrix denoise(const LatentMatrix& z_t, int t, const ModelCondition& cond) const;
  JointCandidate predict_joint(const LatentMatrix& z_shared) const;

  // Replaces every parameter with N(0, sigma^2) draws (gradient audits).
  void randomize(std::uint64_t seed, double sigma);

 private:
  struct Linear {
    int w = -1;
    int b = -1;
  };
  struct Block {
    Linear mod, qkv, proj, cross_q, cross_kv, cross_proj, fc1, fc2;
  };
  struct Head {
    Linear l1, l2;
  };
  class Binder;

  Linear make_linear(const std::string& name, const std::string& group, int in, int out, bool zero,
                     std::mt19937_64& engine);
  void check_condition(const ModelCondition& cond) const;
  ad::Var head(ad::Tape& tape, Binder& bind, const Head& h, ad::Var stats) const;

  DenoiserConfig cfg_;
  ParamStore params_;
  Linear in_latent_, in_cond_, in_image_, time1_, time2_, final_mod_, out_;
  int pos_latent_ = -1, pos_cond_ = -1;
  int stream_[3] = {-1, -1, -1};  // whole, image, context
  std::vector<Block> blocks_;
  Head head_origin_, head_axis_, head_limits_, head_type_;
};

// Sinusoidal embedding of a diffusion step, 1 x width.
ad::Matrix step_embedding(int t, int width);

}  // namespace urdfgen

#endif  // URDFGEN_DIFFUSION_DENOISER_H_
