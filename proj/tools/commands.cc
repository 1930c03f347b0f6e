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


#include "commands.h"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <typeinfo>

#include "urdfgen/common/error.h"
#include "urdfgen/dataset/condition.h"
#include "urdfgen/dataset/latents.h"
#include "urdfgen/dataset/record.h"
#include "urdfgen/dataset/toy.h"
#include "urdfgen/geometry/obj_io.h"
#include "urdfgen/urdf/urdf_io.h"

namespace urdfgen::cli {
namespace {

using nlohmann::json;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

void set_jobs(int jobs) {
  if (jobs < 1) throw InvalidArgument("--jobs must be >= 1");
  omp_set_num_threads(jobs);
}

// Directory of checkpoints epoch_<n>: the highest epoch. Otherwise the path.
fs::path resolve_checkpoint(const fs::path& p) {
  if (fs::exists(p / "manifest.json")) return p;
  fs::path best;
  int best_epoch = -1;
  if (fs::is_directory(p)) {
    for (const auto& e : fs::directory_iterator(p)) {
      const std::string name = e.path().filename().string();
      if (name.rfind("epoch_", 0) != 0 || !fs::exists(e.path() / "manifest.json")) continue;
      const int epoch = std::atoi(name.c_str() + 6);
      if (epoch > best_epoch) {
        best_epoch = epoch;
        best = e.path();
      }
    }
  }
  if (best.empty()) throw IoError("no checkpoint at " + p.string());
  return best;
}

LatentShapeCode condition_code(const fs::path& path, const CodecConfig& codec) {
  const std::string ext = path.extension().string();
  if (ext == ".lsc") return read_lsc(path);
  if (ext == ".json") return encode_mesh(merged_mesh(load_record(path).second), codec, kWholeSurfaceSeed);
  if (ext == ".obj") return encode_mesh(normalize_to_unit_cube(read_obj(path)).first, codec, kWholeSurfaceSeed);
  throw InvalidArgument("unsupported condition file " + path.string() + " (expected .json, .obj or .lsc)");
}

std::map<std::string, fs::path> urdf_index(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".urdf") {
      out[e.path().stem().string()] = e.path();
    } else if (e.is_directory()) {
      std::vector<fs::path> urdfs;
      for (const auto& f : fs::directory_iterator(e.path())) {
        if (f.is_regular_file() && f.path().extension() == ".urdf") urdfs.push_back(f.path());
      }
      std::sort(urdfs.begin(), urdfs.end());
      if (!urdfs.empty()) out[e.path().filename().string()] = urdfs.front();
    }
  }
  return out;
}

}  // namespace

std::string error_kind(const std::exception& e) {
#define URDFGEN_KIND(T) \
  if (dynamic_cast<const T*>(&e)) return #T
  URDFGEN_KIND(InvalidArgument);
  URDFGEN_KIND(InvalidMesh);
  URDFGEN_KIND(ThickeningFailed);
  URDFGEN_KIND(EmptySurface);
  URDFGEN_KIND(IoError);
  URDFGEN_KIND(InvalidKinematicTree);
  URDFGEN_KIND(MeshResolutionError);
  URDFGEN_KIND(InvalidLimits);
  URDFGEN_KIND(LimitViolation);
  URDFGEN_KIND(UrdfParseError);
  URDFGEN_KIND(SchemaError);
  URDFGEN_KIND(GenerationFailed);
  URDFGEN_KIND(DegenerateConfiguration);
  URDFGEN_KIND(AlignmentRejected);
  URDFGEN_KIND(TrainingDiverged);
#undef URDFGEN_KIND
  return "Error";
}

int cmd_preprocess(const RunConfig& cfg, const PreprocessArgs& a) {
  set_jobs(a.jobs);
  if (!fs::is_directory(a.in_dir)) {
    std::fprintf(stderr, "error: %s: not a directory\n", a.in_dir.string().c_str());
    return kExitInput;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(a.in_dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());

  struct Result {
    std::string id;
    ArticulatedObject object;
    std::string error;
  };
  std::vector<Result> results(files.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      auto [record, obj] = load_record(files[i]);
      obj = thicken_object(obj, cfg.preprocess.thickening_offset);
      obj = canonical_link_order(obj, cfg.preprocess.order_tolerance);
      results[i] = {record.id, std::move(obj), ""};
    } catch (const std::exception& e) {
      results[i].error = error_kind(e) + ": " + e.what();
    }
  }

  int failures = 0;
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (results[i].error.empty() && by_id.count(results[i].id)) {
      results[i].error = "duplicate record id '" + results[i].id + "'";
    }
    if (!results[i].error.empty()) {
      std::fprintf(stderr, "error: %s: %s\n", files[i].string().c_str(), results[i].error.c_str());
      ++failures;
      continue;
    }
    by_id[results[i].id] = i;
  }

  std::vector<CacheInput> inputs;
  for (const auto& [id, i] : by_id) {
    save_record(a.out_dir / "records" / id, make_record(id, results[i].object), results[i].object);
    inputs.push_back({id, &results[i].object});
  }
  write_latent_cache(a.out_dir / "latents", precompute_latents(inputs, cfg.codec), cfg.codec);
  std::printf("preprocessed %zu records, %d failed\n", by_id.size(), failures);
  return failures == 0 ? kExitOk : kExitInput;
}

int cmd_train(const RunConfig& cfg, const TrainArgs& a) {
  if (a.stage != 1 && a.stage != 2) {
    std::fprintf(stderr, "error: --stage must be 1 or 2\n");
    return kExitUsage;
  }
  if (a.stage == 2 && !a.init && !a.from_scratch) {
    std::fprintf(stderr, "error: stage 2 needs a stage-1 checkpoint (--init) or --from-scratch\n");
    return kExitUsage;
  }
  const std::vector<LatentCacheEntry> entries = read_latent_cache(a.cache_dir);
  if (entries.empty()) throw InvalidArgument("latent cache " + a.cache_dir.string() + " is empty");

  std::optional<Model> model;
  if (a.init) {
    model.emplace(load_checkpoint(resolve_checkpoint(*a.init)));
  } else {
    model.emplace(cfg.model, cfg.seed, fit_scaling(entries), cfg.schedule_steps, cfg.schedule_offset);
  }
  const std::vector<TrainingExample> examples = build_examples(entries, model->scaling);
  TrainConfig tc = a.stage == 1 ? cfg.stage1 : cfg.stage2;
  if (a.epochs) tc.epochs = *a.epochs;
  tc.checkpoint_dir = a.out_dir;
  std::printf("training stage %d on %zu objects (%zu examples), %d epochs\n", a.stage, entries.size(),
              examples.size(), tc.epochs);
  try {
    const TrainResult r = train(*model, examples, tc, [](const EpochLoss& l) {
      std::printf("epoch %d  total %.5f  diff %.5f  eot %.5f  joint %.5f\n", l.epoch, l.total, l.diff, l.eot,
                  l.joint);
      std::fflush(stdout);
    });
    std::printf("checkpoint %s\n", r.last_checkpoint.string().c_str());
  } catch (const TrainingDiverged& e) {
    std::fprintf(stderr, "error: TrainingDiverged: %s; last checkpoint: %s\n", e.what(),
                 e.last_checkpoint().empty() ? "(none)" : e.last_checkpoint().c_str());
    return kExitInput;
  }
  return kExitOk;
}

int cmd_generate(const RunConfig& cfg, const GenerateArgs& a) {
  set_jobs(a.jobs);
  if (a.n < 1) throw InvalidArgument("--n must be >= 1");
  const Model model = load_checkpoint(resolve_checkpoint(a.checkpoint));
  ConditionSet cond;
  cond.whole_tokens = condition_code(a.condition, cfg.codec);
  if (a.image_features) {
    cond.image_tokens = load_image_features(*a.image_features);
    if (!cond.image_tokens) throw IoError("cannot read " + a.image_features->string());
  }

  struct Sample {
    std::optional<GenerationResult> result;
    std::string error;
  };
  std::vector<Sample> samples(a.n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < a.n; ++i) {
    try {
      samples[i].result = generate_object(model, cond, cfg.generation, a.seed + static_cast<std::uint64_t>(i));
    } catch (const GenerationFailed& e) {
      samples[i].error = e.what();
    }
  }

  std::map<std::string, int> tally;
  json summary = json::array();
  for (int i = 0; i < a.n; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%03d", i);
    const fs::path dir = a.out_dir / name;
    fs::create_directories(dir);
    if (!samples[i].result) {
      ++tally["failed"];
      write_text(dir / "error.txt", samples[i].error + "\n");
      summary.push_back({{"sample", name}, {"status", "failed"}, {"error", samples[i].error}});
      continue;
    }
    const GenerationResult& g = *samples[i].result;
    save_urdf(g.object, dir, name);
    write_text(dir / "report.json", report_to_json(g.report).dump(2) + "\n");
    const std::string reason = termination_name(g.report.reason);
    ++tally[reason];
    summary.push_back({{"sample", name}, {"status", "ok"}, {"termination", reason}, {"links", g.object.size()}});
  }
  write_text(a.out_dir / "summary.json", json{{"samples", summary}, {"tally", tally}}.dump(2) + "\n");
  std::printf("generated %d samples:", a.n);
  for (const auto& [k, v] : tally) std::printf(" %s=%d", k.c_str(), v);
  std::printf("\n");
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const EvalArgs& a) {
  set_jobs(a.jobs);
  const auto pred = urdf_index(a.pred_dir);
  const auto gt = urdf_index(a.gt_dir);
  std::vector<std::string> keys, unpaired;
  for (const auto& [k, p] : pred) (gt.count(k) ? keys : unpaired).push_back(k);
  for (const auto& [k, p] : gt) {
    if (!pred.count(k)) unpaired.push_back(k);
  }
  std::sort(unpaired.begin(), unpaired.end());

  std::vector<std::optional<EvalReport>> reports(keys.size());
  std::vector<std::string> errors(keys.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < keys.size(); ++i) {
    try {
      MetricConfig mc = cfg.metrics;
      EvalReport r = evaluate_object(load_urdf(pred.at(keys[i])), load_urdf(gt.at(keys[i])), mc);
      r.id = keys[i];
      reports[i] = std::move(r);
    } catch (const std::exception& e) {
      errors[i] = error_kind(e) + ": " + e.what();
    }
  }
  fs::create_directories(a.out_dir);
  std::vector<EvalReport> ok;
  int failures = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!reports[i]) {
      std::fprintf(stderr, "error: %s: %s\n", keys[i].c_str(), errors[i].c_str());
      ++failures;
      continue;
    }
    write_text(a.out_dir / (keys[i] + ".json"), report_to_json(*reports[i]).dump(2) + "\n");
    ok.push_back(std::move(*reports[i]));
  }
  const CorpusSummary summary = summarize(ok);
  write_text(a.out_dir / "summary.csv", summary_to_csv(summary));
  for (const auto& [name, stat] : summary.rows) std::printf("%-14s %s\n", name.c_str(), format_mean_std(stat).c_str());
  for (const std::string& k : unpaired) std::fprintf(stderr, "unpaired: %s\n", k.c_str());
  std::printf("evaluated %zu objects, %zu unpaired, %d failed\n", ok.size(), unpaired.size(), failures);
  return unpaired.empty() && failures == 0 ? kExitOk : kExitInput;
}

int cmd_align(const RunConfig& cfg, const AlignArgs& a) {
  const ArticulatedObject generated = load_urdf(a.urdf);
  const std::vector<Vec3> cloud = read_point_cloud(a.cloud);
  SimilarityTransform camera;
  if (a.camera_pose) {
    std::ifstream in(*a.camera_pose);
    if (!in) throw IoError("cannot read " + a.camera_pose->string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw SchemaError(a.camera_pose->string() + ": " + e.what());
    }
    camera = read_pose_json(j);
  }
  PlacedTwin twin;
  try {
    twin = build_twin(generated, cloud, camera, cfg.twin, a.urdf.stem().string());
  } catch (const AlignmentRejected& e) {
    std::fprintf(stderr, "error: AlignmentRejected: %s\n", e.what());
    return kExitRejected;
  }
  const fs::path urdf = save_urdf(twin.object, a.out_dir, a.urdf.stem().string());
  write_text(a.out_dir / "placement.json", placement_json(urdf.filename().string(), twin).dump(2) + "\n");
  std::printf("scale %.6f  rms %.6g  -> %s\n", twin.scale, twin.rms, urdf.string().c_str());
  return kExitOk;
}

int cmd_validate(const fs::path& path) {
  ArticulatedObject obj;
  try {
    obj = load_urdf(path);
  } catch (const Error& e) {
    std::printf("%s: %s\n", error_kind(e).c_str(), e.what());
    return kExitInput;
  }
  const std::vector<Diagnostic> diags = validate(obj);
  for (const Diagnostic& d : diags) std::printf("%s\n", d.message.c_str());
  if (diags.empty()) std::printf("ok: %d links\n", obj.size());
  return diags.empty() ? kExitOk : kExitInput;
}

int cmd_toy(const ToyArgs& a) {
  for (const ToySample& s : generate_toy_dataset(a.n, parse_toy_family(a.family), a.seed)) {
    save_record(a.out_dir / s.record.id, s.record, s.object);
  }
  std::printf("wrote %d %s records to %s\n", a.n, a.family.c_str(), a.out_dir.string().c_str());
  return kExitOk;
}

}  // namespace urdfgen::cli
