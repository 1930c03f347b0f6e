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


// urdfgen: command-line front end.
//
// Exit codes: 0 ok, 1 input error, 2 usage error or guard, 3 alignment rejected.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "commands.h"
#include "urdfgen/common/error.h"

namespace {

using namespace urdfgen::cli;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Articulated object generation toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  std::uint64_t seed_override = 0;
  app.add_option("--config", config_path, std::string("JSON config file (default: $") + kConfigEnvVar + ")");
  auto* seed_opt = app.add_option("--seed", seed_override, "override the config seed");
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the resolved config as JSON");

  PreprocessArgs pre;
  auto* c_pre = app.add_subcommand("preprocess", "normalize, thicken and order records; write the latent cache");
  c_pre->add_option("in_dir", pre.in_dir)->required();
  c_pre->add_option("out_dir", pre.out_dir)->required();
  c_pre->add_option("--jobs", pre.jobs, "worker threads");

  TrainArgs tr;
  std::string init;
  auto* c_train = app.add_subcommand("train", "train one stage from a latent cache");
  c_train->add_option("--cache", tr.cache_dir, "latent cache directory")->required();
  c_train->add_option("--out", tr.out_dir, "checkpoint directory")->required();
  c_train->add_option("--stage", tr.stage, "1 or 2")->required();
  c_train->add_option("--init", init, "checkpoint to start from");
  c_train->add_flag("--from-scratch", tr.from_scratch, "allow stage 2 without a stage-1 checkpoint");
  int epochs = -1;
  c_train->add_option("--epochs", epochs, "override the configured epoch count");

  GenerateArgs gen;
  std::string image_features;
  auto* c_gen = app.add_subcommand("generate", "sample articulated objects");
  c_gen->add_option("--checkpoint", gen.checkpoint)->required();
  c_gen->add_option("--condition", gen.condition, "record JSON, OBJ mesh or .lsc latent")->required();
  c_gen->add_option("--image-features", image_features, ".lsc image feature tokens");
  c_gen->add_option("--out", gen.out_dir)->required();
  c_gen->add_option("-n", gen.n, "number of samples");
  c_gen->add_option("--sample-seed", gen.seed, "seed of the first sample");
  c_gen->add_option("--jobs", gen.jobs, "worker threads");

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "score predicted URDFs against ground truth");
  c_eval->add_option("pred_dir", ev.pred_dir)->required();
  c_eval->add_option("gt_dir", ev.gt_dir)->required();
  c_eval->add_option("--out", ev.out_dir)->required();
  c_eval->add_option("--jobs", ev.jobs, "worker threads");

  AlignArgs al;
  std::string camera;
  auto* c_align = app.add_subcommand("align", "fit a URDF to an observed point cloud");
  c_align->add_option("--urdf", al.urdf)->required();
  c_align->add_option("--cloud", al.cloud, ".xyz, .txt or .ply")->required();
  c_align->add_option("--camera-pose", camera, "camera-to-world pose JSON");
  c_align->add_option("--out", al.out_dir)->required();

  std::string validate_path;
  auto* c_val = app.add_subcommand("validate", "check a URDF");
  c_val->add_option("urdf", validate_path)->required();

  ToyArgs toy;
  auto* c_toy = app.add_subcommand("toy", "write synthetic records");
  c_toy->add_option("out_dir", toy.out_dir)->required();
  c_toy->add_option("--family", toy.family, "hinged_box, drawer_box or laptop");
  c_toy->add_option("-n", toy.n, "number of records");
  c_toy->add_option("--toy-seed", toy.seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg;
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnvVar); env && *env) config_path = env;
    }
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (seed_opt->count() > 0) {
      nlohmann::json j = run_config_to_json(cfg);
      j["seed"] = seed_override;
      cfg = parse_run_config(j);
    }
    std::printf("config %s (%s)\n", config_hash(cfg).c_str(), config_path.empty() ? "defaults" : config_path.c_str());
    if (print_config) std::printf("%s\n", run_config_to_json(cfg).dump(2).c_str());
    std::fflush(stdout);

    if (*c_pre) return cmd_preprocess(cfg, pre);
    if (*c_train) {
      if (!init.empty()) tr.init = init;
      if (epochs >= 0) tr.epochs = epochs;
      return cmd_train(cfg, tr);
    }
    if (*c_gen) {
      if (!image_features.empty()) gen.image_features = image_features;
      return cmd_generate(cfg, gen);
    }
    if (*c_eval) return cmd_eval(cfg, ev);
    if (*c_align) {
      if (!camera.empty()) al.camera_pose = camera;
      return cmd_align(cfg, al);
    }
    if (*c_val) return cmd_validate(validate_path);
    if (*c_toy) return cmd_toy(toy);
  } catch (const urdfgen::InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s: %s\n", error_kind(e).c_str(), e.what());
    return kExitInput;
  }
  return kExitUsage;
}
