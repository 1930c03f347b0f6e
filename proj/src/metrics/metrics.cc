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


#include "urdfgen/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/geometry/voxel.h"
#include "urdfgen/kernels/nearest.h"

namespace urdfgen {

void MetricConfig::validate() const {
  if (!(fscore_tau > 0) || voxel_resolution <= 0 || eval_points <= 0) {
    throw InvalidArgument("metric config values must be positive");
  }
}

namespace {

void require_nonempty(std::span<const Vec3> p, std::span<const Vec3> g) {
  if (p.empty() || g.empty()) throw InvalidArgument("metric needs two nonempty point sets");
}

TriangleMesh closed(const TriangleMesh& mesh) {
  return is_watertight(mesh) ? mesh : thicken_mesh(mesh);
}

std::vector<std::uint8_t> union_occupancy(std::span<const TriangleMesh> meshes, const GridSpec& grid) {
  std::vector<std::uint8_t> occ(grid.cell_count(), 0);
  for (const TriangleMesh& m : meshes) {
    const VoxelGrid v = voxelize(m, grid);
    for (std::size_t i = 0; i < occ.size(); ++i) occ[i] |= v.occupancy[i];
  }
  return occ;
}

// Link frame position in the object frame.
Vec3 frame_position(const ArticulatedObject& obj, int link) {
  Vec3 p = Vec3::Zero();
  for (int i = link, guard = 0; obj.links[i].joint && guard <= obj.size(); ++guard) {
    p += obj.links[i].joint->origin;
    i = obj.links[i].joint->parent;
  }
  return p;
}

}  // namespace

double iou(std::span<const TriangleMesh> a, std::span<const TriangleMesh> b, int resolution) {
  if (resolution <= 0) throw InvalidArgument("voxel resolution must be positive");
  Aabb box;
  for (const auto* side : {&a, &b}) {
    for (const TriangleMesh& m : *side) {
      if (!is_watertight(m)) throw InvalidMesh("IoU requires watertight meshes");
      box.extend(bounds(m));
    }
  }
  if (!box.valid()) return 0.0;
  const GridSpec grid = covering_grid(box, resolution);
  const auto oa = union_occupancy(a, grid);
  const auto ob = union_occupancy(b, grid);
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < oa.size(); ++i) {
    inter += oa[i] & ob[i];
    uni += oa[i] | ob[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double iou(const TriangleMesh& a, const TriangleMesh& b, const MetricConfig& cfg) {
  return iou(std::span(&a, 1), std::span(&b, 1), cfg.voxel_resolution);
}

double chamfer(std::span<const Vec3> p, std::span<const Vec3> g) {
  require_nonempty(p, g);
  const auto dp = nearest_sq_distances(p, g);
  const auto dg = nearest_sq_distances(g, p);
  double sp = 0, sg = 0;
  for (double d : dp) sp += d;
  for (double d : dg) sg += d;
  return sp / static_cast<double>(p.size()) + sg / static_cast<double>(g.size());
}

double fscore(std::span<const Vec3> p, std::span<const Vec3> g, double tau) {
  require_nonempty(p, g);
  auto within = [tau](const std::vector<double>& d) {
    std::size_t n = 0;
    for (double x : d) n += std::sqrt(x) < tau;
    return static_cast<double>(n) / static_cast<double>(d.size());
  };
  const double precision = within(nearest_sq_distances(p, g));
  const double recall = within(nearest_sq_distances(g, p));
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double joint_axis_error(const Vec3& pred, const Vec3& gt) {
  if (std::abs(pred.norm() - 1.0) > 1e-6 || std::abs(gt.norm() - 1.0) > 1e-6) {
    throw InvalidArgument("axis error needs unit vectors");
  }
  return std::acos(std::clamp(pred.dot(gt), -1.0, 1.0));
}

double joint_origin_error(const Vec3& pred, const Vec3& gt) { return (pred - gt).norm(); }

double joint_limit_error(const Eigen::Vector2d& pred, const Eigen::Vector2d& gt) {
  return 0.5 * (std::abs(pred(0) - gt(0)) + std::abs(pred(1) - gt(1)));
}

Assignment hungarian(const Eigen::MatrixXd& cost) {
  const int rows = static_cast<int>(cost.rows()), cols = static_cast<int>(cost.cols());
  Assignment out;
  out.row_to_col.assign(rows, -1);
  if (rows == 0 || cols == 0) {
    for (int i = 0; i < rows; ++i) out.unmatched_rows.push_back(i);
    for (int j = 0; j < cols; ++j) out.unmatched_cols.push_back(j);
    return out;
  }
  // Potentials method on an n x n matrix padded with zero-cost dummies.
  const int n = std::max(rows, cols);
  auto c = [&](int i, int j) { return i < rows && j < cols ? cost(i, j) : 0.0; };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<char> col_used(cols, 0);
  for (int j = 1; j <= n; ++j) {
    const int i = p[j] - 1, col = j - 1;
    if (i < rows && col < cols) {
      out.row_to_col[i] = col;
      col_used[col] = 1;
      out.total_cost += cost(i, col);
    }
  }
  for (int i = 0; i < rows; ++i) {
    if (out.row_to_col[i] < 0) out.unmatched_rows.push_back(i);
  }
  for (int j = 0; j < cols; ++j) {
    if (!col_used[j]) out.unmatched_cols.push_back(j);
  }
  return out;
}

std::vector<std::vector<Vec3>> sample_links(const ArticulatedObject& obj, int n, std::uint64_t seed) {
  std::vector<std::vector<Vec3>> out;
  for (int i = 0; i < obj.size(); ++i) {
    out.push_back(sample_surface(obj.links[i].mesh, n, seed + static_cast<std::uint64_t>(i)).points);
  }
  return out;
}

namespace {

Assignment match_clouds(const std::vector<std::vector<Vec3>>& pred, const std::vector<std::vector<Vec3>>& gt) {
  Eigen::MatrixXd cost(pred.size(), gt.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gt.size(); ++j) cost(i, j) = chamfer(pred[i], gt[j]);
  }
  return hungarian(cost);
}

}  // namespace

Assignment match_parts(const ArticulatedObject& pred, const ArticulatedObject& gt, const MetricConfig& cfg) {
  cfg.validate();
  return match_clouds(sample_links(pred, cfg.eval_points, cfg.seed), sample_links(gt, cfg.eval_points, cfg.seed));
}

MetricStat describe(std::span<const double> values) {
  MetricStat s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.count;
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / s.count);
  return s;
}

EvalReport evaluate_object(const ArticulatedObject& pred, const ArticulatedObject& gt, const MetricConfig& cfg) {
  cfg.validate();
  if (pred.size() == 0 || gt.size() == 0) throw InvalidArgument("evaluation needs nonempty objects");
  const auto pc = sample_links(pred, cfg.eval_points, cfg.seed);
  const auto gc = sample_links(gt, cfg.eval_points, cfg.seed);
  EvalReport r;
  const Assignment a = match_clouds(pc, gc);
  r.matching_cost = a.total_cost;
  for (int i : a.unmatched_rows) r.unmatched_pred.push_back(pred.links[i].name);
  for (int j : a.unmatched_cols) r.unmatched_gt.push_back(gt.links[j].name);

  std::vector<TriangleMesh> pm, gm;
  for (const Link& l : pred.links) pm.push_back(closed(l.mesh));
  for (const Link& l : gt.links) gm.push_back(closed(l.mesh));

  for (int i = 0; i < pred.size(); ++i) {
    const int j = a.row_to_col[i];
    if (j < 0) continue;
    PartReport part{pred.links[i].name, gt.links[j].name, {}};
    part.scores.iou = iou(std::span(&pm[i], 1), std::span(&gm[j], 1), cfg.voxel_resolution);
    part.scores.fscore = fscore(pc[i], gc[j], cfg.fscore_tau);
    part.scores.chamfer = chamfer(pc[i], gc[j]);
    r.parts.push_back(part);

    const auto& pj = pred.links[i].joint;
    const auto& gj = gt.links[j].joint;
    if (!pj || !gj || pj->type == JointType::kFixed || gj->type == JointType::kFixed) continue;
    JointReport jr;
    jr.pred_link = pred.links[i].name;
    jr.gt_link = gt.links[j].name;
    jr.pred_type = pj->type;
    jr.gt_type = gj->type;
    jr.axis_err = joint_axis_error(pj->axis.normalized(), gj->axis.normalized());
    jr.origin_err = joint_origin_error(frame_position(pred, i), frame_position(gt, j));
    if (has_limits(pj->type) && has_limits(gj->type)) {
      jr.limit_err = joint_limit_error({pj->lower, pj->upper}, {gj->lower, gj->upper});
    }
    r.joints.push_back(jr);
  }

  std::vector<Vec3> pw, gw;
  for (const auto& c : pc) pw.insert(pw.end(), c.begin(), c.end());
  for (const auto& c : gc) gw.insert(gw.end(), c.begin(), c.end());
  r.whole.iou = iou(pm, gm, cfg.voxel_resolution);
  r.whole.fscore = fscore(pw, gw, cfg.fscore_tau);
  r.whole.chamfer = chamfer(pw, gw);
  return r;
}

namespace {

nlohmann::json scores_json(const GeometryScores& s) {
  return {{"iou", s.iou}, {"fscore", s.fscore}, {"chamfer", s.chamfer}};
}

}  // namespace

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["id"] = report.id;
  j["whole"] = scores_json(report.whole);
  j["matching_cost"] = report.matching_cost;
  j["parts"] = nlohmann::json::array();
  for (const PartReport& p : report.parts) {
    j["parts"].push_back({{"pred", p.pred_link}, {"gt", p.gt_link}, {"scores", scores_json(p.scores)}});
  }
  j["joints"] = nlohmann::json::array();
  for (const JointReport& jr : report.joints) {
    nlohmann::json e = {{"pred", jr.pred_link},
                        {"gt", jr.gt_link},
                        {"pred_type", std::string(joint_type_name(jr.pred_type))},
                        {"gt_type", std::string(joint_type_name(jr.gt_type))},
                        {"axis_err", jr.axis_err},
                        {"origin_err", jr.origin_err}};
    e["limit_err"] = jr.limit_err ? nlohmann::json(*jr.limit_err) : nlohmann::json(nullptr);
    j["joints"].push_back(e);
  }
  j["unmatched_pred"] = report.unmatched_pred;
  j["unmatched_gt"] = report.unmatched_gt;
  return j;
}

CorpusSummary summarize(std::span<const EvalReport> reports) {
  std::vector<std::pair<std::string, std::vector<double>>> cols = {
      {"whole_iou", {}},  {"whole_fscore", {}}, {"whole_chamfer", {}}, {"part_iou", {}},
      {"part_fscore", {}}, {"part_chamfer", {}}, {"axis_err", {}},      {"origin_err", {}},
      {"limit_err", {}}};
  for (const EvalReport& r : reports) {
    cols[0].second.push_back(r.whole.iou);
    cols[1].second.push_back(r.whole.fscore);
    cols[2].second.push_back(r.whole.chamfer);
    for (const PartReport& p : r.parts) {
      cols[3].second.push_back(p.scores.iou);
      cols[4].second.push_back(p.scores.fscore);
      cols[5].second.push_back(p.scores.chamfer);
    }
    for (const JointReport& j : r.joints) {
      cols[6].second.push_back(j.axis_err);
      cols[7].second.push_back(j.origin_err);
      if (j.limit_err) cols[8].second.push_back(*j.limit_err);
    }
  }
  CorpusSummary s;
  for (auto& [name, values] : cols) s.rows.push_back({name, describe(values)});
  return s;
}

std::string format_mean_std(const MetricStat& s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f ± %.3f", s.mean, s.std);
  return buf;
}

std::string summary_to_csv(const CorpusSummary& summary) {
  std::ostringstream out;
  out << "metric,mean,std,count,formatted\n";
  char buf[64];
  for (const auto& [name, s] : summary.rows) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g", s.mean, s.std);
    out << name << ',' << buf << ',' << s.count << ',' << format_mean_std(s) << '\n';
  }
  return out.str();
}

}  // namespace urdfgen
