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


#include "run_config.h"

#include <cstdio>
#include <fstream>

#include "urdfgen/common/error.h"

namespace urdfgen::cli {
namespace {

using nlohmann::json;

// Reads j[key] into *out when present, tracking which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_ + ": expected an object");
  }

  template <typename T>
  void get(const char* key, T* out) {
    seen_.push_back(key);
    if (!j_.contains(key)) return;
    const json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw SchemaError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw SchemaError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw SchemaError("");
      }
      *out = v.get<T>();
    } catch (const std::exception&) {
      throw SchemaError(path_ + "." + key + ": wrong type (" + v.dump() + ")");
    }
  }

  Section sub(const char* key) {
    seen_.push_back(key);
    static const json kEmpty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : kEmpty, path_ + "." + key);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) {
        throw SchemaError(path_ + ": unknown key '" + k + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string> seen_;
};

void read_train(Section s, TrainConfig* t) {
  s.get("learning_rate", &t->learning_rate);
  s.get("head_learning_rate", &t->head_learning_rate);
  s.get("batch_size", &t->batch_size);
  s.get("epochs", &t->epochs);
  s.get("weight_decay", &t->weight_decay);
  s.get("beta1", &t->beta1);
  s.get("beta2", &t->beta2);
  s.get("adam_eps", &t->adam_eps);
  s.get("grad_clip", &t->grad_clip);
  s.get("checkpoint_every", &t->checkpoint_every);
  s.get("eot_weight", &t->weights.eot);
  s.get("joint_weight", &t->weights.joint);
  s.finish();
}

json train_json(const TrainConfig& t) {
  return {{"learning_rate", t.learning_rate}, {"head_learning_rate", t.head_learning_rate},
          {"batch_size", t.batch_size},       {"epochs", t.epochs},
          {"weight_decay", t.weight_decay},   {"beta1", t.beta1},
          {"beta2", t.beta2},                 {"adam_eps", t.adam_eps},
          {"grad_clip", t.grad_clip},         {"checkpoint_every", t.checkpoint_every},
          {"eot_weight", t.weights.eot},      {"joint_weight", t.weights.joint}};
}

void check(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument("config: " + what);
}

}  // namespace

RunConfig::RunConfig() {
  stage1.stage = TrainStage::kStage1;
  stage1.learning_rate = kStage1LearningRate;
  stage2.stage = TrainStage::kStage2;
  stage2.learning_rate = kStage2LearningRate;
  // Freshly initialized joint heads do not converge at the stage-2 trunk rate.
  stage2.head_learning_rate = 1e-2;
}

void RunConfig::validate() const {
  codec.validate();
  model.validate();
  generation.validate();
  metrics.validate();
  check(model.tokens == codec.m_tokens && model.latent_width == codec.feature_width,
        "model.tokens/latent_width must equal codec.m_tokens/feature_width");
  check(generation.codec.m_tokens == codec.m_tokens && generation.codec.feature_width == codec.feature_width &&
            generation.codec.n_sample_points == codec.n_sample_points,
        "generation codec differs from codec");
  check(schedule_steps >= 1, "schedule.steps must be >= 1");
  check(schedule_offset > 0, "schedule.offset must be > 0");
  for (const TrainConfig* t : {&stage1, &stage2}) {
    check(t->learning_rate > 0 && t->head_learning_rate >= 0, "learning rates must be positive");
    check(t->batch_size >= 1 && t->epochs >= 0 && t->checkpoint_every >= 0, "batch_size/epochs out of range");
    check(t->weights.eot >= 0 && t->weights.joint >= 0, "loss weights must be >= 0");
  }
  check(twin.sample_points >= 3 && twin.yaw_starts >= 1 && twin.max_iter >= 1 && twin.max_rms > 0,
        "align settings out of range");
  check(preprocess.thickening_offset > 0 && preprocess.order_tolerance >= 0, "preprocess settings out of range");
}

RunConfig parse_run_config(const json& j) {
  RunConfig c;
  Section root(j, "config");
  root.get("seed", &c.seed);
  {
    Section s = root.sub("codec");
    s.get("m_tokens", &c.codec.m_tokens);
    s.get("feature_width", &c.codec.feature_width);
    s.get("n_sample_points", &c.codec.n_sample_points);
    s.finish();
  }
  {
    Section s = root.sub("schedule");
    s.get("steps", &c.schedule_steps);
    s.get("offset", &c.schedule_offset);
    s.finish();
  }
  {
    Section s = root.sub("model");
    s.get("image_width", &c.model.image_width);
    s.get("width", &c.model.width);
    s.get("blocks", &c.model.blocks);
    s.get("heads", &c.model.heads);
    s.get("mlp_ratio", &c.model.mlp_ratio);
    s.get("head_hidden", &c.model.head_hidden);
    s.get("stats_sharpness", &c.model.stats_sharpness);
    s.finish();
  }
  read_train(root.sub("stage1"), &c.stage1);
  read_train(root.sub("stage2"), &c.stage2);
  {
    Section s = root.sub("generate");
    s.get("k_max", &c.generation.k_max);
    s.get("sampling_steps", &c.generation.sampling_steps);
    s.get("mesh_resolution", &c.generation.mesh_resolution);
    s.get("eot_distance", &c.generation.thresholds.eot_distance);
    s.get("redundancy_overlap", &c.generation.thresholds.redundancy_overlap);
    s.get("redundancy_resolution", &c.generation.thresholds.redundancy_resolution);
    s.get("snap_origin", &c.generation.snap_origin);
    s.finish();
  }
  {
    Section s = root.sub("metrics");
    s.get("fscore_tau", &c.metrics.fscore_tau);
    s.get("voxel_resolution", &c.metrics.voxel_resolution);
    s.get("eval_points", &c.metrics.eval_points);
    s.finish();
  }
  {
    Section s = root.sub("align");
    s.get("sample_points", &c.twin.sample_points);
    s.get("yaw_starts", &c.twin.yaw_starts);
    s.get("max_iter", &c.twin.max_iter);
    s.get("tol", &c.twin.tol);
    s.get("max_rms", &c.twin.max_rms);
    s.finish();
  }
  {
    Section s = root.sub("preprocess");
    s.get("thickening_offset", &c.preprocess.thickening_offset);
    s.get("order_tolerance", &c.preprocess.order_tolerance);
    s.finish();
  }
  root.finish();
  c.model.tokens = c.codec.m_tokens;
  c.model.latent_width = c.codec.feature_width;
  c.generation.codec = c.codec;
  c.metrics.seed = c.seed;
  c.twin.seed = c.seed;
  c.stage1.seed = c.seed;
  c.stage2.seed = c.seed + 1;
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SchemaError("config " + path.string() + ": " + e.what());
  }
  return parse_run_config(j);
}

json run_config_to_json(const RunConfig& c) {
  return {
      {"seed", c.seed},
      {"codec",
       {{"m_tokens", c.codec.m_tokens},
        {"feature_width", c.codec.feature_width},
        {"n_sample_points", c.codec.n_sample_points}}},
      {"schedule", {{"steps", c.schedule_steps}, {"offset", c.schedule_offset}}},
      {"model",
       {{"image_width", c.model.image_width},
        {"width", c.model.width},
        {"blocks", c.model.blocks},
        {"heads", c.model.heads},
        {"mlp_ratio", c.model.mlp_ratio},
        {"head_hidden", c.model.head_hidden},
        {"stats_sharpness", c.model.stats_sharpness}}},
      {"stage1", train_json(c.stage1)},
      {"stage2", train_json(c.stage2)},
      {"generate",
       {{"k_max", c.generation.k_max},
        {"sampling_steps", c.generation.sampling_steps},
        {"mesh_resolution", c.generation.mesh_resolution},
        {"eot_distance", c.generation.thresholds.eot_distance},
        {"redundancy_overlap", c.generation.thresholds.redundancy_overlap},
        {"redundancy_resolution", c.generation.thresholds.redundancy_resolution},
        {"snap_origin", c.generation.snap_origin}}},
      {"metrics",
       {{"fscore_tau", c.metrics.fscore_tau},
        {"voxel_resolution", c.metrics.voxel_resolution},
        {"eval_points", c.metrics.eval_points}}},
      {"align",
       {{"sample_points", c.twin.sample_points},
        {"yaw_starts", c.twin.yaw_starts},
        {"max_iter", c.twin.max_iter},
        {"tol", c.twin.tol},
        {"max_rms", c.twin.max_rms}}},
      {"preprocess",
       {{"thickening_offset", c.preprocess.thickening_offset},
        {"order_tolerance", c.preprocess.order_tolerance}}},
  };
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : run_config_to_json(cfg).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace urdfgen::cli
