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


#ifndef URDFGEN_METRICS_METRICS_H_
#define URDFGEN_METRICS_METRICS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "urdfgen/geometry/types.h"
#include "urdfgen/urdf/model.h"

namespace urdfgen {

inline constexpr double kDefaultFscoreTau = 0.02;

struct MetricConfig {
  double fscore_tau = kDefaultFscoreTau;
  int voxel_resolution = 64;
  int eval_points = 10000;
  std::uint64_t seed = 0;  // surface sampling

  void validate() const;  // InvalidArgument unless all positive
};

// Voxel IoU on a grid covering both inputs. Each side may be several closed
// meshes; their occupancies are unioned. Non-watertight input throws
// InvalidMesh.
double iou(const TriangleMesh& a, const TriangleMesh& b, const MetricConfig& cfg);
double iou(std::span<const TriangleMesh> a, std::span<const TriangleMesh> b, int resolution);

// Mean squared nearest distance p -> g plus g -> p.
double chamfer(std::span<const Vec3> p, std::span<const Vec3> g);
// Harmonic mean of precision and recall at distance < tau.
double fscore(std::span<const Vec3> p, std::span<const Vec3> g, double tau);

double joint_axis_error(const Vec3& pred, const Vec3& gt);  // [0, pi]
double joint_origin_error(const Vec3& pred, const Vec3& gt);
double joint_limit_error(const Eigen::Vector2d& pred, const Eigen::Vector2d& gt);

// Minimum-cost one-to-one assignment on a rectangular cost matrix.
struct Assignment {
  std::vector<int> row_to_col;  // -1 for unmatched rows
  double total_cost = 0.0;
  std::vector<int> unmatched_rows, unmatched_cols;
};
Assignment hungarian(const Eigen::MatrixXd& cost);

// Rest-pose surface samples per link.
std::vector<std::vector<Vec3>> sample_links(const ArticulatedObject& obj, int n, std::uint64_t seed);

// Rows are predicted links, columns ground-truth links, cost is Chamfer.
Assignment match_parts(const ArticulatedObject& pred, const ArticulatedObject& gt, const MetricConfig& cfg);

struct GeometryScores {
  double iou = 0, fscore = 0, chamfer = 0;
};

struct PartReport {
  std::string pred_link, gt_link;
  GeometryScores scores;
};

struct JointReport {
  std::string pred_link, gt_link;
  JointType gt_type = JointType::kFixed;
  JointType pred_type = JointType::kFixed;
  double axis_err = 0, origin_err = 0;
  std::optional<double> limit_err;  // both joints limited
};

struct MetricStat {
  double mean = 0, std = 0;
  int count = 0;
};
MetricStat describe(std::span<const double> values);  // population std

struct EvalReport {
  std::string id;
  GeometryScores whole;
  std::vector<PartReport> parts;
  std::vector<JointReport> joints;
  std::vector<std::string> unmatched_pred, unmatched_gt;
  double matching_cost = 0.0;
};

// Matches parts, then scores matched parts, the merged objects and the
// joints of matched movable pairs. Joint origins are compared in the object
// frame. Open surfaces are thickened before voxelization.
EvalReport evaluate_object(const ArticulatedObject& pred, const ArticulatedObject& gt, const MetricConfig& cfg);

nlohmann::json report_to_json(const EvalReport& report);

// Corpus table: one row per metric with mean, std and count.
struct CorpusSummary {
  std::vector<std::pair<std::string, MetricStat>> rows;
};
CorpusSummary summarize(std::span<const EvalReport> reports);
std::string summary_to_csv(const CorpusSummary& summary);
std::string format_mean_std(const MetricStat& s);

}  // namespace urdfgen

#endif  // URDFGEN_METRICS_METRICS_H_
