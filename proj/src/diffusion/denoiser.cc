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


#include "urdfgen/diffusion/denoiser.h"

#include <algorithm>
#include <cmath>

#include "urdfgen/common/error.h"

namespace urdfgen {

using ad::Matrix;
using ad::Tape;
using ad::Var;

void DenoiserConfig::validate() const {
  if (tokens < 1 || latent_width < 1 || image_width < 0 || width < 1 || blocks < 0 || heads < 1 ||
      mlp_ratio < 1 || head_hidden < 1 || !(stats_sharpness > 0)) {
    throw InvalidArgument("DenoiserConfig: sizes must be positive");
  }
  if (width % heads != 0) throw InvalidArgument("DenoiserConfig: width must be divisible by heads");
}

int ParamStore::add(std::string name, std::string group, Matrix init) {
  if (find(name) >= 0) throw InvalidArgument("ParamStore: duplicate parameter " + name);
  items_.push_back({std::move(name), std::move(group), std::move(init)});
  return size() - 1;
}

int ParamStore::find(const std::string& name) const {
  for (int i = 0; i < size(); ++i) {
    if (items_[i].name == name) return i;
  }
  return -1;
}

std::vector<std::string> ParamStore::groups() const {
  std::vector<std::string> out;
  for (const Param& p : items_) {
    if (out.empty() || std::find(out.begin(), out.end(), p.group) == out.end()) out.push_back(p.group);
  }
  return out;
}

std::vector<Matrix> ParamStore::zeros_like() const {
  std::vector<Matrix> out;
  out.reserve(items_.size());
  for (const Param& p : items_) out.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  return out;
}

long long ParamStore::scalar_count() const {
  long long n = 0;
  for (const Param& p : items_) n += p.value.size();
  return n;
}

LatentScaling LatentScaling::identity(int width) { return {Eigen::RowVectorXd::Ones(width)}; }

LatentMatrix LatentScaling::to_model(const LatentShapeCode& code) const {
  if (code.width != scale.size()) throw InvalidArgument("LatentScaling: width mismatch");
  LatentMatrix z(code.m, code.width);
  for (int r = 0; r < code.m; ++r) {
    for (int c = 0; c < code.width; ++c) z(r, c) = code.at(r, c) / scale(c);
  }
  return z;
}

LatentShapeCode LatentScaling::to_code(const LatentMatrix& z) const {
  if (z.cols() != scale.size()) throw InvalidArgument("LatentScaling: width mismatch");
  LatentShapeCode code = LatentShapeCode::zeros(static_cast<int>(z.rows()), static_cast<int>(z.cols()));
  for (int r = 0; r < code.m; ++r) {
    for (int c = 0; c < code.width; ++c) code.at(r, c) = static_cast<float>(z(r, c) * scale(c));
  }
  return code;
}

ModelCondition to_model(const ConditionSet& cond, const LatentScaling& scaling) {
  ModelCondition out;
  out.whole = scaling.to_model(cond.whole_tokens);
  if (cond.context_tokens) out.context = scaling.to_model(*cond.context_tokens);
  if (cond.image_tokens) {
    const LatentShapeCode& img = *cond.image_tokens;
    out.image = LatentMatrix(img.m, img.width);
    for (int r = 0; r < img.m; ++r) {
      for (int c = 0; c < img.width; ++c) (*out.image)(r, c) = img.at(r, c);
    }
  }
  return out;
}

Matrix step_embedding(int t, int width) {
  Matrix e(1, width);
  const int half = width / 2;
  for (int i = 0; i < half; ++i) {
    const double freq = std::exp(-std::log(10000.0) * i / std::max(half, 1));
    e(0, i) = std::sin(t * freq);
    e(0, half + i) = std::cos(t * freq);
  }
  if (width % 2) e(0, width - 1) = 0.0;
  return e;
}

// Binds each parameter to the tape at most once.
class Denoiser::Binder {
 public:
  Binder(Tape& tape, const ParamStore& params, std::vector<Matrix>* grads)
      : tape_(tape), params_(params), grads_(grads), vars_(params.size(), Var{}) {}

  Var operator()(int index) {
    if (vars_[index].id < 0) {
      vars_[index] = tape_.parameter(params_[index].value, grads_ ? &(*grads_)[index] : nullptr);
    }
    return vars_[index];
  }
  Var linear(Var x, const Linear& l) { return tape_.linear(x, (*this)(l.w), (*this)(l.b)); }

 private:
  Tape& tape_;
  const ParamStore& params_;
  std::vector<Matrix>* grads_;
  std::vector<Var> vars_;
};

Denoiser::Linear Denoiser::make_linear(const std::string& name, const std::string& group, int in, int out,
                                       bool zero, std::mt19937_64& engine) {
  Matrix w = Matrix::Zero(in, out);
  if (!zero) {
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(in)));
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = normal(engine);
  }
  Linear l;
  l.w = params_.add(name + ".w", group, std::move(w));
  l.b = params_.add(name + ".b", group, Matrix::Zero(1, out));
  return l;
}

Denoiser::Denoiser(const DenoiserConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.validate();
  std::mt19937_64 engine(seed);
  const int w = cfg.width, dw = cfg.latent_width;
  auto embedding = [&](const std::string& name, int rows) {
    std::normal_distribution<double> normal(0.0, 0.02);
    Matrix m(rows, w);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(engine);
    return params_.add(name, "embed", std::move(m));
  };
  in_latent_ = make_linear("in_latent", "embed", dw, w, false, engine);
  in_cond_ = make_linear("in_cond", "embed", dw, w, false, engine);
  if (cfg.image_width > 0) in_image_ = make_linear("in_image", "embed", cfg.image_width, w, false, engine);
  pos_latent_ = embedding("pos_latent", cfg.tokens);
  pos_cond_ = embedding("pos_cond", cfg.tokens);
  stream_[0] = embedding("stream_whole", 1);
  stream_[1] = embedding("stream_image", 1);
  stream_[2] = embedding("stream_context", 1);
  time1_ = make_linear("time1", "time", w, w, false, engine);
  time2_ = make_linear("time2", "time", w, w, false, engine);
  for (int b = 0; b < cfg.blocks; ++b) {
    const std::string p = "block" + std::to_string(b);
    Block blk;
    blk.mod = make_linear(p + ".mod", p, w, 9 * w, true, engine);
    blk.qkv = make_linear(p + ".qkv", p, w, 3 * w, false, engine);
    blk.proj = make_linear(p + ".proj", p, w, w, false, engine);
    blk.cross_q = make_linear(p + ".cross_q", p, w, w, false, engine);
    blk.cross_kv = make_linear(p + ".cross_kv", p, w, 2 * w, false, engine);
    blk.cross_proj = make_linear(p + ".cross_proj", p, w, w, false, engine);
    blk.fc1 = make_linear(p + ".fc1", p, w, cfg.mlp_ratio * w, false, engine);
    blk.fc2 = make_linear(p + ".fc2", p, cfg.mlp_ratio * w, w, false, engine);
    blocks_.push_back(blk);
  }
  final_mod_ = make_linear("final.mod", "final", w, 2 * w, true, engine);
  out_ = make_linear("final.out", "final", w, dw, true, engine);

  const int stats = 4 * dw, hh = cfg.head_hidden;
  auto make_head = [&](const std::string& name, int out) {
    return Head{make_linear(name + ".l1", name, stats, hh, false, engine),
                make_linear(name + ".l2", name, hh, out, false, engine)};
  };
  head_origin_ = make_head("head_origin", 3);
  head_axis_ = make_head("head_axis", 3);
  head_limits_ = make_head("head_limits", 2);
  head_type_ = make_head("head_type", kJointTypeCount);
}

void Denoiser::check_condition(const ModelCondition& cond) const {
  auto latent_shaped = [&](const LatentMatrix& m) {
    return m.rows() == cfg_.tokens && m.cols() == cfg_.latent_width;
  };
  if (!latent_shaped(cond.whole)) throw InvalidArgument("denoise: whole tokens have the wrong shape");
  if (cond.context && !latent_shaped(*cond.context)) {
    throw InvalidArgument("denoise: context tokens have the wrong shape");
  }
  if (cond.image) {
    if (cfg_.image_width == 0) throw InvalidArgument("denoise: model has no image stream");
    if (cond.image->cols() != cfg_.image_width || cond.image->rows() < 1) {
      throw InvalidArgument("denoise: image tokens have the wrong shape");
    }
  }
}

Var Denoiser::velocity(Tape& tape, std::vector<Matrix>* grads, Var z_t, int t, const ModelCondition& cond) const {
  check_condition(cond);
  const Matrix& z = tape.value(z_t);
  if (z.rows() != cfg_.tokens || z.cols() != cfg_.latent_width) {
    throw InvalidArgument("denoise: latent has the wrong shape");
  }
  Binder bind(tape, params_, grads);
  const int w = cfg_.width;

  Var x = tape.add(bind.linear(z_t, in_latent_), bind(pos_latent_));
  Var temb = tape.constant(step_embedding(t, w));
  Var c = bind.linear(tape.silu(bind.linear(temb, time1_)), time2_);
  Var sc = tape.silu(c);

  std::vector<Var> streams;
  auto cond_stream = [&](const LatentMatrix& m, int stream) {
    Var e = tape.add(bind.linear(tape.constant(m), in_cond_), bind(pos_cond_));
    return tape.add_row(e, bind(stream_[stream]));
  };
  streams.push_back(cond_stream(cond.whole, 0));
  if (cond.image) {
    streams.push_back(tape.add_row(bind.linear(tape.constant(*cond.image), in_image_), bind(stream_[1])));
  }
  if (cond.context) streams.push_back(cond_stream(*cond.context, 2));
  Var ctx = tape.layer_norm(streams.size() == 1 ? streams[0] : tape.concat_rows(streams));

  auto modulate = [&](Var h, Var shift, Var scale) {
    return tape.add_row(tape.mul_row(tape.layer_norm(h), tape.add_const(scale, 1.0)), shift);
  };
  for (const Block& blk : blocks_) {
    Var mod = bind.linear(sc, blk.mod);
    auto chunk = [&](int i) { return tape.slice_cols(mod, i * w, w); };

    Var h = modulate(x, chunk(0), chunk(1));
    Var qkv = bind.linear(h, blk.qkv);
    Var a = tape.attention(tape.slice_cols(qkv, 0, w), tape.slice_cols(qkv, w, w),
                           tape.slice_cols(qkv, 2 * w, w), cfg_.heads);
    x = tape.add(x, tape.mul_row(bind.linear(a, blk.proj), chunk(2)));

    h = modulate(x, chunk(3), chunk(4));
    Var kv = bind.linear(ctx, blk.cross_kv);
    a = tape.attention(bind.linear(h, blk.cross_q), tape.slice_cols(kv, 0, w), tape.slice_cols(kv, w, w),
                       cfg_.heads);
    x = tape.add(x, tape.mul_row(bind.linear(a, blk.cross_proj), chunk(5)));

    h = modulate(x, chunk(6), chunk(7));
    Var m = bind.linear(tape.gelu(bind.linear(h, blk.fc1)), blk.fc2);
    x = tape.add(x, tape.mul_row(m, chunk(8)));
  }
  Var fm = bind.linear(sc, final_mod_);
  Var h = modulate(x, tape.slice_cols(fm, 0, w), tape.slice_cols(fm, w, w));
  return bind.linear(h, out_);
}

Var Denoiser::head(Tape& tape, Binder& bind, const Head& h, Var stats) const {
  return bind.linear(tape.silu(bind.linear(stats, h.l1)), h.l2);
}

HeadVars Denoiser::heads(Tape& tape, std::vector<Matrix>* grads, Var z_shared) const {
  const Matrix& z = tape.value(z_shared);
  if (z.rows() != cfg_.tokens || z.cols() != cfg_.latent_width) {
    throw InvalidArgument("heads: latent has the wrong shape");
  }
  Binder bind(tape, params_, grads);
  Var stats = tape.token_stats(z_shared, cfg_.stats_sharpness);
  return {head(tape, bind, head_origin_, stats), head(tape, bind, head_axis_, stats),
          head(tape, bind, head_limits_, stats), head(tape, bind, head_type_, stats)};
}

LatentMatrix Denoiser::denoise(const LatentMatrix& z_t, int t, const ModelCondition& cond) const {
  Tape tape;
  return tape.value(velocity(tape, nullptr, tape.constant(z_t), t, cond));
}

JointCandidate Denoiser::predict_joint(const LatentMatrix& z_shared) const {
  Tape tape;
  const HeadVars h = heads(tape, nullptr, tape.constant(z_shared));
  JointCandidate c;
  c.raw_origin = tape.value(h.origin).row(0).transpose();
  c.raw_axis = tape.value(h.axis_raw).row(0).transpose();
  c.raw_limits = tape.value(h.limits).row(0).transpose();
  c.logits = tape.value(h.logits).row(0).transpose();

  Eigen::Index best = 0;
  c.logits.maxCoeff(&best);
  c.joint.type = static_cast<JointType>(best);
  c.joint.origin = c.raw_origin;
  const double len = c.raw_axis.norm();
  c.joint.axis = len > 0 && std::isfinite(len) ? Vec3(c.raw_axis / len) : Vec3(Vec3::UnitZ());
  if (has_limits(c.joint.type)) {
    c.joint.lower = std::min(c.raw_limits(0), c.raw_limits(1));
    c.joint.upper = std::max(c.raw_limits(0), c.raw_limits(1));
  }
  return c;
}

void Denoiser::randomize(std::uint64_t seed, double sigma) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (int i = 0; i < params_.size(); ++i) {
    Matrix& m = params_[i].value;
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = normal(engine);
  }
}

}  // namespace urdfgen
