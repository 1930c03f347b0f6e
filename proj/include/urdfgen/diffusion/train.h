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


#ifndef URDFGEN_DIFFUSION_TRAIN_H_
#define URDFGEN_DIFFUSION_TRAIN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "urdfgen/dataset/latents.h"
#include "urdfgen/diffusion/loss.h"

namespace urdfgen {

inline constexpr double kStage1LearningRate = 1e-4;
inline constexpr double kStage2LearningRate = 1e-5;

// Everything needed to sample: network, latent scaling and schedule.
struct Model {
  Denoiser denoiser;
  LatentScaling scaling;
  NoiseSchedule schedule;
  int schedule_steps = kDefaultDiffusionSteps;
  double schedule_offset = kCosineOffset;

  Model(const DenoiserConfig& cfg, std::uint64_t seed, LatentScaling scaling,
        int steps = kDefaultDiffusionSteps, double offset = kCosineOffset);
};

// Per-channel RMS over every part latent; channels that are identically zero
// keep scale 1.
LatentScaling fit_scaling(std::span<const LatentCacheEntry> entries);

// For an entry with K links: K part steps (the step-k condition carries the
// prefix of the first k-1 parts as context) and one terminal step whose
// target is the zero latent and whose context is the full prefix.
std::vector<TrainingExample> build_examples(std::span<const LatentCacheEntry> entries,
                                            const LatentScaling& scaling);

struct TrainConfig {
  TrainStage stage = TrainStage::kStage1;
  LossWeights weights;
  double learning_rate = kStage1LearningRate;
  double head_learning_rate = 0.0;  // heads use learning_rate when 0
  int batch_size = 16;
  int epochs = 10;
  double weight_decay = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  double grad_clip = 1.0;  // global norm; 0 disables
  std::uint64_t seed = 0;
  std::filesystem::path checkpoint_dir;  // empty: no files written
  int checkpoint_every = 0;              // epochs between checkpoints; 0: final only
};

struct EpochLoss {
  int epoch = 0;
  double diff = 0, eot = 0, joint = 0, total = 0;
};

struct TrainResult {
  std::vector<EpochLoss> curve;
  std::filesystem::path last_checkpoint;
};

// AdamW over shuffled minibatches with uniform steps t in [1, T] and
// standard-normal noise, all drawn from cfg.seed. Writes <dir>/loss.csv and
// checkpoints <dir>/epoch_<n> when a directory is set. Throws
// TrainingDiverged on a non-finite loss.
TrainResult train(Model& model, std::span<const TrainingExample> examples, const TrainConfig& cfg,
                  const std::function<void(const EpochLoss&)>& on_epoch = {});

struct CheckpointInfo {
  TrainStage stage = TrainStage::kStage1;
  int epoch = 0;
};

// Manifest JSON (architecture, schedule, scaling, stage, epoch, section
// table) plus a little-endian float32 blob with one named section per
// parameter.
void save_checkpoint(const std::filesystem::path& dir, const Model& model, const CheckpointInfo& info);
Model load_checkpoint(const std::filesystem::path& dir, CheckpointInfo* info = nullptr);

std::string stage_name(TrainStage stage);

}  // namespace urdfgen

#endif  // URDFGEN_DIFFUSION_TRAIN_H_
