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


#ifndef URDFGEN_TOOLS_RUN_CONFIG_H_
#define URDFGEN_TOOLS_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "urdfgen/codec/codec.h"
#include "urdfgen/dataset/record.h"
#include "urdfgen/diffusion/denoiser.h"
#include "urdfgen/diffusion/train.h"
#include "urdfgen/generator/generator.h"
#include "urdfgen/metrics/metrics.h"
#include "urdfgen/twin/twin.h"

namespace urdfgen::cli {

// Environment variable naming the config file used when --config is absent.
inline constexpr const char* kConfigEnvVar = "URDFGEN_CONFIG";

struct PreprocessSettings {
  double thickening_offset = kDefaultThickeningOffset;
  double order_tolerance = kDefaultOrderTolerance;
};

struct RunConfig {
  std::uint64_t seed = 0;
  CodecConfig codec;
  int schedule_steps = kDefaultDiffusionSteps;
  double schedule_offset = kCosineOffset;
  DenoiserConfig model;
  TrainConfig stage1;
  TrainConfig stage2;
  GenerationConfig generation;
  MetricConfig metrics;
  TwinConfig twin;
  PreprocessSettings preprocess;

  RunConfig();
  void validate() const;  // InvalidArgument
};

// Every key is optional; unknown keys and wrong types throw SchemaError.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
// Fully resolved config, keys sorted.
nlohmann::json run_config_to_json(const RunConfig& cfg);
// FNV-1a 64 of the resolved JSON, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace urdfgen::cli

#endif  // URDFGEN_TOOLS_RUN_CONFIG_H_
