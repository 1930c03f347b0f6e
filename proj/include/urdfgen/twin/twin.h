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


#ifndef URDFGEN_TWIN_TWIN_H_
#define URDFGEN_TWIN_TWIN_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "urdfgen/geometry/types.h"
#include "urdfgen/urdf/model.h"

namespace urdfgen {

// Least-squares similarity mapping source[i] onto target[i] (closed form).
// Throws DegenerateConfiguration for fewer than 3 pairs or collinear points.
SimilarityTransform estimate_similarity(std::span<const Vec3> source, std::span<const Vec3> target);

struct IcpResult {
  SimilarityTransform transform;
  double rms = 0.0;          // symmetric objective
  double forward_rms = 0.0;  // source -> target only
  int iterations = 0;
  std::vector<double> history;  // rms after each correspondence step
};

// Point-to-point ICP with symmetric nearest-neighbor pairs and the scale
// estimated in the loop. Stops when the rms improves by less than tol or
// after max_iter updates; returns the best transform seen.
IcpResult icp_align(std::span<const Vec3> source, std::span<const Vec3> target, const SimilarityTransform& init,
                    int max_iter = 100, double tol = 1e-10);

struct TwinConfig {
  int sample_points = 4096;
  int yaw_starts = 8;  // initial rotations about world +z
  int max_iter = 100;
  double tol = 1e-10;
  double max_rms = 0.05;  // forward residual, world units
  std::uint64_t seed = 0;
};

struct PlacedTwin {
  ArticulatedObject object;        // rescaled by the recovered scale
  SimilarityTransform world_pose;  // rigid: object frame -> world
  double scale = 1.0;
  double rms = 0.0;
  std::string source_id;
};

// Samples the generated object at rest, moves the observed cloud to the
// world frame and registers the two with yaw multi-start ICP. Throws
// AlignmentRejected for an empty cloud or a residual above cfg.max_rms.
PlacedTwin build_twin(const ArticulatedObject& generated, std::span<const Vec3> observed_camera,
                      const SimilarityTransform& camera_to_world, const TwinConfig& cfg,
                      std::string source_id = "");

// ASCII XYZ (one point per line, extra columns ignored) or PLY (ASCII or
// binary little-endian, vertex positions only), chosen by extension.
std::vector<Vec3> read_point_cloud(const std::filesystem::path& path);
void write_xyz(const std::filesystem::path& path, std::span<const Vec3> points);
void write_ply(const std::filesystem::path& path, std::span<const Vec3> points);  // binary LE float32

// {urdf_path, scale, rotation (row-major 9), translation (3), rms_residual}
nlohmann::json placement_json(const std::string& urdf_path, const PlacedTwin& twin);
SimilarityTransform read_pose_json(const nlohmann::json& j);  // same keys; scale defaults to 1

}  // namespace urdfgen

#endif  // URDFGEN_TWIN_TWIN_H_
