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


#ifndef URDFGEN_TOOLS_COMMANDS_H_
#define URDFGEN_TOOLS_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "run_config.h"

namespace urdfgen::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRejected = 3;

namespace fs = std::filesystem;

struct PreprocessArgs {
  fs::path in_dir, out_dir;
  int jobs = 1;
};
// Every *.json below in_dir is read as a record. Writes out_dir/records/<id>/
// (normalized, thickened, canonical order) and the latent cache in
// out_dir/latents.
int cmd_preprocess(const RunConfig& cfg, const PreprocessArgs& a);

struct TrainArgs {
  fs::path cache_dir, out_dir;
  int stage = 1;
  std::optional<fs::path> init;  // checkpoint to continue from
  bool from_scratch = false;     // allow stage 2 without a stage-1 checkpoint
  std::optional<int> epochs;
};
int cmd_train(const RunConfig& cfg, const TrainArgs& a);

struct GenerateArgs {
  fs::path checkpoint, condition, out_dir;
  std::optional<fs::path> image_features;
  int n = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
};
// condition: a record JSON, an OBJ mesh or a latent code (.lsc).
int cmd_generate(const RunConfig& cfg, const GenerateArgs& a);

struct EvalArgs {
  fs::path pred_dir, gt_dir, out_dir;
  int jobs = 1;
};
// Objects are keyed by subdirectory name (a directory holding one *.urdf) or
// by the stem of a top-level *.urdf.
int cmd_eval(const RunConfig& cfg, const EvalArgs& a);

struct AlignArgs {
  fs::path urdf, cloud, out_dir;
  std::optional<fs::path> camera_pose;  // identity when absent
};
int cmd_align(const RunConfig& cfg, const AlignArgs& a);

int cmd_validate(const fs::path& urdf);

struct ToyArgs {
  fs::path out_dir;
  std::string family = "hinged_box";
  int n = 10;
  std::uint64_t seed = 0;
};
// Writes synthetic records in the layout preprocess reads.
int cmd_toy(const ToyArgs& a);

// "InvalidLimits", "IoError", ... for library errors.
std::string error_kind(const std::exception& e);

}  // namespace urdfgen::cli

#endif  // URDFGEN_TOOLS_COMMANDS_H_
