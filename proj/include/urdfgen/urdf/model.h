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


#ifndef URDFGEN_URDF_MODEL_H_
#define URDFGEN_URDF_MODEL_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Geometry>

#include "urdfgen/geometry/types.h"

namespace urdfgen {

enum class JointType { kFixed = 0, kRevolute = 1, kPrismatic = 2, kContinuous = 3 };
inline constexpr int kJointTypeCount = 4;

std::string_view joint_type_name(JointType type);
// Accepts the URDF spellings; throws InvalidArgument for anything else.
JointType parse_joint_type(std::string_view name);
inline bool has_limits(JointType type) {
  return type == JointType::kRevolute || type == JointType::kPrismatic;
}

// All link frames are kept parallel to the object frame at rest, so `origin`
// is the offset of the child frame from the parent frame expressed in object
// axes, and `axis` is expressed in object axes too.
struct JointSpec {
  Vec3 origin = Vec3::Zero();
  Vec3 axis = Vec3::UnitX();
  JointType type = JointType::kFixed;
  double lower = 0.0;  // radians (revolute) or meters (prismatic)
  double upper = 0.0;
  int parent = 0;      // index into ArticulatedObject::links

  bool operator==(const JointSpec&) const = default;
};

// Meshes are stored in the object frame at the rest configuration.
struct Link {
  std::string name;
  TriangleMesh mesh;
  std::optional<JointSpec> joint;  // absent exactly for the root
};

struct ArticulatedObject {
  std::vector<Link> links;

  int size() const { return static_cast<int>(links.size()); }
  // Index of the unique joint-free link; throws InvalidKinematicTree if there
  // is not exactly one.
  int root() const;
  int find(std::string_view name) const;  // -1 when absent
};

enum class DiagnosticKind {
  kNonUnitAxis,
  kInvalidLimits,
  kEmptyMesh,
  kNoRoot,
  kMultipleRoots,
  kBadParent,
  kCycle,
  kDuplicateName,
  kEmptyName,
  kNonFinite,
};

struct Diagnostic {
  DiagnosticKind kind;
  int link = -1;
  std::string message;  // e.g. "NonUnitAxis(link_2)"
};

std::string_view diagnostic_name(DiagnosticKind kind);

// Empty iff the object is a valid tree with unique names, unit axes on every
// non-fixed joint, ordered limits, finite numbers and non-empty meshes.
std::vector<Diagnostic> validate(const ArticulatedObject& obj);

// Link indices ordered so that every parent precedes its children. Throws
// InvalidKinematicTree when the parent graph is not a tree.
std::vector<int> topological_order(const ArticulatedObject& obj);

// World transform of every link frame for joint values q (one entry per link;
// the root entry is ignored). Revolute and continuous joints rotate by q about
// the axis through the joint origin, prismatic joints translate by q * axis.
// Throws LimitViolation when a limited joint value falls outside its limits.
std::vector<Eigen::Isometry3d> forward_kinematics(const ArticulatedObject& obj,
                                                  const std::vector<double>& q);

// Rigid motion that carries each link's rest geometry to configuration q:
// FK(q) * FK(0)^-1.
std::vector<Eigen::Isometry3d> link_motions(const ArticulatedObject& obj,
                                            const std::vector<double>& q);

std::vector<TriangleMesh> posed_meshes(const ArticulatedObject& obj, const std::vector<double>& q);
// Union of all link meshes at the rest configuration.
TriangleMesh merged_mesh(const ArticulatedObject& obj);

// Maps mesh vertices by t, joint origins of root-attached joints by t (they
// are positions in the object frame) and deeper origins by t's linear part,
// rotates axes, and scales prismatic limits. Throws InvalidArgument for a
// non-positive scale.
ArticulatedObject apply_similarity(const ArticulatedObject& obj, const SimilarityTransform& t);

// Rest-configuration world position of every link frame.
std::vector<Vec3> rest_frame_positions(const ArticulatedObject& obj);

}  // namespace urdfgen

#endif  // URDFGEN_URDF_MODEL_H_
