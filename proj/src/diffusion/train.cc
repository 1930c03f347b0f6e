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


#include "urdfgen/diffusion/train.h"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"
#include "urdfgen/common/error.h"
#include "urdfgen/diffusion/sampler.h"

namespace urdfgen {
namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "checkpoint blobs are little-endian");

bool is_head(const Param& p) { return p.group.rfind("head_", 0) == 0; }

void write_loss_csv(const std::filesystem::path& path, const std::vector<EpochLoss>& curve) {
  std::ofstream out(path);
  out << "epoch,L_diff,L_EOT,L_joint,total\n";
  char line[160];
  for (const EpochLoss& e : curve) {
    std::snprintf(line, sizeof line, "%d,%.9g,%.9g,%.9g,%.9g\n", e.epoch, e.diff, e.eot, e.joint, e.total);
    out << line;
  }
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace

std::string stage_name(TrainStage stage) { return stage == TrainStage::kStage1 ? "stage1" : "stage2"; }

Model::Model(const DenoiserConfig& cfg, std::uint64_t seed, LatentScaling s, int steps, double offset)
    : denoiser(cfg, seed),
      scaling(std::move(s)),
      schedule(NoiseSchedule::cosine(steps, offset)),
      schedule_steps(steps),
      schedule_offset(offset) {
  if (scaling.scale.size() != cfg.latent_width) throw InvalidArgument("Model: scaling width mismatch");
}

LatentScaling fit_scaling(std::span<const LatentCacheEntry> entries) {
  if (entries.empty() || entries[0].z_part.empty()) throw InvalidArgument("fit_scaling: no latents");
  const int width = entries[0].z_part[0].width;
  Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(width);
  double count = 0;
  for (const LatentCacheEntry& e : entries) {
    for (const LatentShapeCode& z : e.z_part) {
      if (z.width != width) throw InvalidArgument("fit_scaling: mixed latent widths");
      for (int r = 0; r < z.m; ++r) {
        for (int c = 0; c < width; ++c) sum(c) += static_cast<double>(z.at(r, c)) * z.at(r, c);
      }
      count += z.m;
    }
  }
  LatentScaling s{Eigen::RowVectorXd::Ones(width)};
  for (int c = 0; c < width; ++c) {
    const double rms = std::sqrt(sum(c) / count);
    if (rms > 1e-12) s.scale(c) = rms;
  }
  return s;
}

std::vector<TrainingExample> build_examples(std::span<const LatentCacheEntry> entries,
                                            const LatentScaling& scaling) {
  std::vector<TrainingExample> out;
  for (const LatentCacheEntry& e : entries) {
    const LatentMatrix whole = scaling.to_model(e.z_whole);
    const int k_count = e.link_count();
    for (int k = 0; k <= k_count; ++k) {
      TrainingExample ex;
      ex.cond.whole = whole;
      if (k > 0) ex.cond.context = scaling.to_model(e.z_prefix[k - 1]);
      if (k < k_count) {
        ex.z0 = scaling.to_model(e.z_part[k]);
        if (e.joints[k]) ex.joint = JointTarget::from(*e.joints[k]);
      } else {
        ex.z0 = LatentMatrix::Zero(whole.rows(), whole.cols());
        ex.eot = true;
      }
      out.push_back(std::move(ex));
    }
  }
  return out;
}

TrainResult train(Model& model, std::span<const TrainingExample> examples, const TrainConfig& cfg,
                  const std::function<void(const EpochLoss&)>& on_epoch) {
  if (examples.empty()) throw InvalidArgument("train: no examples");
  if (cfg.batch_size < 1 || cfg.epochs < 0) throw InvalidArgument("train: bad batch size or epoch count");
  ParamStore& params = model.denoiser.params();
  std::vector<ad::Matrix> m1 = params.zeros_like(), m2 = params.zeros_like();
  const int n = static_cast<int>(examples.size());
  const int rows = model.denoiser.config().tokens, cols = model.denoiser.config().latent_width;
  std::mt19937_64 engine(cfg.seed);
  std::vector<int> order(n);
  long long step = 0;
  TrainResult result;
  if (!cfg.checkpoint_dir.empty()) std::filesystem::create_directories(cfg.checkpoint_dir);

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), engine);
    EpochLoss acc;
    acc.epoch = epoch;
    int batches = 0;
    for (int start = 0; start < n; start += cfg.batch_size) {
      const int b = std::min(cfg.batch_size, n - start);
      std::vector<TrainingExample> batch;
      std::vector<NoiseDraw> noise;
      std::uniform_int_distribution<int> pick_t(1, model.schedule.T);
      for (int i = 0; i < b; ++i) {
        batch.push_back(examples[order[start + i]]);
        const int t = pick_t(engine);
        noise.push_back({t, standard_normal(rows, cols, engine())});
      }
      std::vector<ad::Matrix> grads = params.zeros_like();
      const LossBreakdown loss = batch_loss(model.denoiser, model.schedule, batch, noise, cfg.stage,
                                            cfg.weights, &grads);
      if (!std::isfinite(loss.total)) {
        throw TrainingDiverged("training loss became non-finite at epoch " + std::to_string(epoch),
                               result.last_checkpoint.string());
      }
      double norm2 = 0;
      for (const auto& g : grads) norm2 += g.squaredNorm();
      const double clip = cfg.grad_clip > 0 && std::sqrt(norm2) > cfg.grad_clip ? cfg.grad_clip / std::sqrt(norm2) : 1.0;
      ++step;
      const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (int k = 0; k < params.size(); ++k) {
        Param& p = params[k];
        const double lr = is_head(p) && cfg.head_learning_rate > 0 ? cfg.head_learning_rate : cfg.learning_rate;
        const ad::Matrix g = clip * grads[k];
        m1[k] = cfg.beta1 * m1[k] + (1 - cfg.beta1) * g;
        m2[k] = cfg.beta2 * m2[k] + (1 - cfg.beta2) * g.cwiseProduct(g);
        p.value *= 1.0 - lr * cfg.weight_decay;
        p.value.array() -= lr * (m1[k].array() / c1) / ((m2[k].array() / c2).sqrt() + cfg.adam_eps);
      }
      acc.diff += loss.diff;
      acc.eot += loss.eot;
      acc.joint += loss.joint;
      acc.total += loss.total;
      ++batches;
    }
    acc.diff /= batches;
    acc.eot /= batches;
    acc.joint /= batches;
    acc.total /= batches;
    result.curve.push_back(acc);
    if (on_epoch) on_epoch(acc);
    if (!cfg.checkpoint_dir.empty()) {
      const bool due = epoch == cfg.epochs || (cfg.checkpoint_every > 0 && epoch % cfg.checkpoint_every == 0);
      if (due) {
        char name[32];
        std::snprintf(name, sizeof name, "epoch_%04d", epoch);
        result.last_checkpoint = cfg.checkpoint_dir / name;
        save_checkpoint(result.last_checkpoint, model, {cfg.stage, epoch});
      }
      write_loss_csv(cfg.checkpoint_dir / "loss.csv", result.curve);
    }
  }
  return result;
}

void save_checkpoint(const std::filesystem::path& dir, const Model& model, const CheckpointInfo& info) {
  std::filesystem::create_directories(dir);
  const DenoiserConfig& c = model.denoiser.config();
  json manifest;
  manifest["format"] = "urdfgen-checkpoint";
  manifest["architecture"] = {{"tokens", c.tokens},         {"latent_width", c.latent_width},
                              {"image_width", c.image_width}, {"width", c.width},
                              {"blocks", c.blocks},         {"heads", c.heads},
                              {"mlp_ratio", c.mlp_ratio},   {"head_hidden", c.head_hidden},
                              {"stats_sharpness", c.stats_sharpness}};
  manifest["schedule"] = {{"kind", "cosine"}, {"T", model.schedule_steps}, {"offset", model.schedule_offset}};
  manifest["latent_scale"] = std::vector<double>(model.scaling.scale.data(),
                                                 model.scaling.scale.data() + model.scaling.scale.size());
  manifest["stage"] = stage_name(info.stage);
  manifest["epoch"] = info.epoch;
  json sections = json::array();
  std::ofstream blob(dir / "weights.bin", std::ios::binary);
  long long offset = 0;
  const ParamStore& ps = model.denoiser.params();
  for (int i = 0; i < ps.size(); ++i) {
    const ad::Matrix& m = ps[i].value;
    sections.push_back({{"name", ps[i].name}, {"rows", m.rows()}, {"cols", m.cols()}, {"offset", offset}});
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index col = 0; col < m.cols(); ++col) {
        const float f = static_cast<float>(m(r, col));
        blob.write(reinterpret_cast<const char*>(&f), sizeof f);
      }
    }
    offset += m.size() * static_cast<long long>(sizeof(float));
  }
  manifest["sections"] = std::move(sections);
  if (!blob) throw IoError("cannot write " + (dir / "weights.bin").string());
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
}

Model load_checkpoint(const std::filesystem::path& dir, CheckpointInfo* info) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw IoError("cannot read checkpoint manifest in " + dir.string());
  try {
    json manifest;
    in >> manifest;
    const json& a = manifest.at("architecture");
    DenoiserConfig c;
    c.tokens = a.at("tokens");
    c.latent_width = a.at("latent_width");
    c.image_width = a.at("image_width");
    c.width = a.at("width");
    c.blocks = a.at("blocks");
    c.heads = a.at("heads");
    c.mlp_ratio = a.at("mlp_ratio");
    c.head_hidden = a.at("head_hidden");
    c.stats_sharpness = a.at("stats_sharpness");
    const std::vector<double> scale = manifest.at("latent_scale").get<std::vector<double>>();
    LatentScaling scaling{Eigen::Map<const Eigen::RowVectorXd>(scale.data(), static_cast<Eigen::Index>(scale.size()))};
    Model model(c, 0, scaling, manifest.at("schedule").at("T").get<int>(),
                manifest.at("schedule").at("offset").get<double>());
    std::ifstream blob(dir / "weights.bin", std::ios::binary);
    if (!blob) throw IoError("cannot read " + (dir / "weights.bin").string());
    ParamStore& ps = model.denoiser.params();
    int loaded = 0;
    for (const json& s : manifest.at("sections")) {
      const int idx = ps.find(s.at("name").get<std::string>());
      if (idx < 0) throw SchemaError("checkpoint: unknown section " + s.at("name").get<std::string>());
      ad::Matrix& m = ps[idx].value;
      if (s.at("rows").get<long long>() != m.rows() || s.at("cols").get<long long>() != m.cols()) {
        throw SchemaError("checkpoint: shape mismatch in " + ps[idx].name);
      }
      blob.seekg(s.at("offset").get<long long>());
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index col = 0; col < m.cols(); ++col) {
          float f;
          blob.read(reinterpret_cast<char*>(&f), sizeof f);
          m(r, col) = f;
        }
      }
      if (!blob) throw IoError("checkpoint: truncated weights for " + ps[idx].name);
      ++loaded;
    }
    if (loaded != ps.size()) throw SchemaError("checkpoint: missing parameter sections");
    if (info) {
      info->stage = manifest.at("stage").get<std::string>() == "stage2" ? TrainStage::kStage2 : TrainStage::kStage1;
      info->epoch = manifest.at("epoch").get<int>();
    }
    return model;
  } catch (const json::exception& e) {
    throw SchemaError("checkpoint manifest: " + std::string(e.what()));
  }
}

}  // namespace urdfgen
