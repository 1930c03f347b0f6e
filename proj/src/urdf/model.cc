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


#include "urdfgen/urdf/model.h"

#include <cmath>
#include <set>
#include <string>

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"

namespace urdfgen {
namespace {

constexpr double kAxisTolerance = 1e-6;

Eigen::Isometry3d joint_motion(const JointSpec& j, double q) {
  Eigen::Isometry3d m = Eigen::Isometry3d::Identity();
  switch (j.type) {
    case JointType::kRevolute:
    case JointType::kContinuous:
      m.linear() = Eigen::AngleAxisd(q, j.axis.normalized()).toRotationMatrix();
      break;
    case JointType::kPrismatic:
      m.translation() = q * j.axis;
      break;
    case JointType::kFixed:
      break;
  }
  return m;
}

std::string label(DiagnosticKind kind, const std::string& what) {
  return std::string(diagnostic_name(kind)) + "(" + what + ")";
}

}  // namespace

std::string_view joint_type_name(JointType type) {
  switch (type) {
    case JointType::kFixed: return "fixed";
    case JointType::kRevolute: return "revolute";
    case JointType::kPrismatic: return "prismatic";
    case JointType::kContinuous: return "continuous";
  }
  return "fixed";
}

JointType parse_joint_type(std::string_view name) {
  if (name == "fixed") return JointType::kFixed;
  if (name == "revolute") return JointType::kRevolute;
  if (name == "prismatic") return JointType::kPrismatic;
  if (name == "continuous") return JointType::kContinuous;
  throw InvalidArgument("unsupported joint type '" + std::string(name) + "'");
}

std::string_view diagnostic_name(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kNonUnitAxis: return "NonUnitAxis";
    case DiagnosticKind::kInvalidLimits: return "InvalidLimits";
    case DiagnosticKind::kEmptyMesh: return "EmptyMesh";
    case DiagnosticKind::kNoRoot: return "NoRoot";
    case DiagnosticKind::kMultipleRoots: return "MultipleRoots";
    case DiagnosticKind::kBadParent: return "BadParent";
    case DiagnosticKind::kCycle: return "Cycle";
    case DiagnosticKind::kDuplicateName: return "DuplicateName";
    case DiagnosticKind::kEmptyName: return "EmptyName";
    case DiagnosticKind::kNonFinite: return "NonFinite";
  }
  return "Unknown";
}

int ArticulatedObject::root() const {
  int root = -1;
  for (int i = 0; i < size(); ++i) {
    if (links[i].joint) continue;
    if (root >= 0) throw InvalidKinematicTree("object has more than one root link");
    root = i;
  }
  if (root < 0) throw InvalidKinematicTree("object has no root link");
  return root;
}

int ArticulatedObject::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if (links[i].name == name) return i;
  }
  return -1;
}

std::vector<int> topological_order(const ArticulatedObject& obj) {
  const int n = obj.size();
  const int root = obj.root();
  std::vector<std::vector<int>> children(n);
  for (int i = 0; i < n; ++i) {
    if (!obj.links[i].joint) continue;
    const int p = obj.links[i].joint->parent;
    if (p < 0 || p >= n || p == i) {
      throw InvalidKinematicTree("link '" + obj.links[i].name + "' has an invalid parent");
    }
    children[p].push_back(i);
  }
  std::vector<int> order{root};
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int c : children[order[head]]) order.push_back(c);
  }
  if (static_cast<int>(order.size()) != n) {
    throw InvalidKinematicTree("joint graph has a cycle or unreachable links");
  }
  return order;
}

std::vector<Diagnostic> validate(const ArticulatedObject& obj) {
  std::vector<Diagnostic> out;
  const int n = obj.size();
  int roots = 0;
  std::set<std::string> names;
  for (int i = 0; i < n; ++i) {
    const Link& link = obj.links[i];
    const std::string who = link.name.empty() ? "#" + std::to_string(i) : link.name;
    if (link.name.empty()) out.push_back({DiagnosticKind::kEmptyName, i, label(DiagnosticKind::kEmptyName, who)});
    if (!link.name.empty() && !names.insert(link.name).second) {
      out.push_back({DiagnosticKind::kDuplicateName, i, label(DiagnosticKind::kDuplicateName, who)});
    }
    if (link.mesh.empty()) out.push_back({DiagnosticKind::kEmptyMesh, i, label(DiagnosticKind::kEmptyMesh, who)});
    bool finite = true;
    for (const Vec3& v : link.mesh.vertices) finite = finite && v.allFinite();
    if (!link.joint) {
      ++roots;
    } else {
      const JointSpec& j = *link.joint;
      finite = finite && j.origin.allFinite() && j.axis.allFinite() && std::isfinite(j.lower) &&
               std::isfinite(j.upper);
      if (j.parent < 0 || j.parent >= n || j.parent == i) {
        out.push_back({DiagnosticKind::kBadParent, i, label(DiagnosticKind::kBadParent, who)});
      }
      if (j.type != JointType::kFixed && std::abs(j.axis.norm() - 1.0) > kAxisTolerance) {
        out.push_back({DiagnosticKind::kNonUnitAxis, i, label(DiagnosticKind::kNonUnitAxis, who)});
      }
      if (has_limits(j.type) && !(j.lower <= j.upper)) {
        out.push_back({DiagnosticKind::kInvalidLimits, i, label(DiagnosticKind::kInvalidLimits, who)});
      }
    }
    if (!finite) out.push_back({DiagnosticKind::kNonFinite, i, label(DiagnosticKind::kNonFinite, who)});
  }
  if (roots == 0) out.push_back({DiagnosticKind::kNoRoot, -1, label(DiagnosticKind::kNoRoot, "object")});
  if (roots > 1) out.push_back({DiagnosticKind::kMultipleRoots, -1, label(DiagnosticKind::kMultipleRoots, "object")});
  if (roots == 1) {
    bool parents_ok = true;
    for (const Diagnostic& d : out) parents_ok = parents_ok && d.kind != DiagnosticKind::kBadParent;
    if (parents_ok) {
      try {
        topological_order(obj);
      } catch (const InvalidKinematicTree&) {
        out.push_back({DiagnosticKind::kCycle, -1, label(DiagnosticKind::kCycle, "object")});
      }
    }
  }
  return out;
}

std::vector<Eigen::Isometry3d> forward_kinematics(const ArticulatedObject& obj,
                                                  const std::vector<double>& q) {
  if (static_cast<int>(q.size()) != obj.size()) {
    throw InvalidArgument("expected one joint value per link");
  }
  std::vector<Eigen::Isometry3d> frames(obj.size(), Eigen::Isometry3d::Identity());
  for (int i : topological_order(obj)) {
    const Link& link = obj.links[i];
    if (!link.joint) continue;
    const JointSpec& j = *link.joint;
    if (has_limits(j.type) && (q[i] < j.lower || q[i] > j.upper)) {
      throw LimitViolation("joint value " + std::to_string(q[i]) + " for link '" + link.name +
                           "' outside [" + std::to_string(j.lower) + ", " +
                           std::to_string(j.upper) + "]");
    }
    Eigen::Isometry3d offset = Eigen::Isometry3d::Identity();
    offset.translation() = j.origin;
    frames[i] = frames[j.parent] * offset * joint_motion(j, q[i]);
  }
  return frames;
}

std::vector<Vec3> rest_frame_positions(const ArticulatedObject& obj) {
  std::vector<Vec3> pos(obj.size(), Vec3::Zero());
  for (int i : topological_order(obj)) {
    const Link& link = obj.links[i];
    if (link.joint) pos[i] = pos[link.joint->parent] + link.joint->origin;
  }
  return pos;
}

std::vector<Eigen::Isometry3d> link_motions(const ArticulatedObject& obj,
                                            const std::vector<double>& q) {
  std::vector<Eigen::Isometry3d> frames = forward_kinematics(obj, q);
  const std::vector<Vec3> rest = rest_frame_positions(obj);
  for (int i = 0; i < obj.size(); ++i) {
    Eigen::Isometry3d back = Eigen::Isometry3d::Identity();
    back.translation() = -rest[i];
    frames[i] = frames[i] * back;
  }
  return frames;
}

std::vector<TriangleMesh> posed_meshes(const ArticulatedObject& obj, const std::vector<double>& q) {
  const std::vector<Eigen::Isometry3d> motions = link_motions(obj, q);
  std::vector<TriangleMesh> out;
  out.reserve(obj.size());
  for (int i = 0; i < obj.size(); ++i) {
    TriangleMesh m = obj.links[i].mesh;
    for (Vec3& v : m.vertices) v = motions[i] * v;
    out.push_back(std::move(m));
  }
  return out;
}

TriangleMesh merged_mesh(const ArticulatedObject& obj) {
  std::vector<TriangleMesh> meshes;
  for (const Link& link : obj.links) meshes.push_back(link.mesh);
  return merge_meshes(meshes);
}

ArticulatedObject apply_similarity(const ArticulatedObject& obj, const SimilarityTransform& t) {
  if (!(t.scale > 0) || !std::isfinite(t.scale)) {
    throw InvalidArgument("similarity scale must be positive, got " + std::to_string(t.scale));
  }
  ArticulatedObject out = obj;
  for (Link& link : out.links) {
    for (Vec3& v : link.mesh.vertices) v = t.apply(v);
    if (!link.joint) continue;
    JointSpec& j = *link.joint;
    const bool root_attached = !obj.links[j.parent].joint;
    j.origin = root_attached ? t.apply(j.origin) : t.apply_linear(j.origin);
    j.axis = t.rotation * j.axis;
    if (j.type == JointType::kPrismatic) {
      j.lower *= t.scale;
      j.upper *= t.scale;
    }
  }
  return out;
}

}  // namespace urdfgen
