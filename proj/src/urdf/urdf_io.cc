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


#include "urdfgen/urdf/urdf_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/geometry/obj_io.h"

namespace urdfgen {
namespace {

namespace pt = boost::property_tree;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Vec3 parse_triple(const std::string& text, const std::string& where) {
  std::istringstream in(text);
  Vec3 v;
  if (!(in >> v.x() >> v.y() >> v.z())) {
    throw UrdfParseError("expected three numbers in " + where + ", got '" + text + "'");
  }
  std::string extra;
  if (in >> extra) throw UrdfParseError("trailing data in " + where + ": '" + text + "'");
  return v;
}

double parse_number(const std::string& text, const std::string& where) {
  std::istringstream in(text);
  double v;
  if (!(in >> v)) throw UrdfParseError("expected a number in " + where + ", got '" + text + "'");
  return v;
}

// URDF fixed-axis roll-pitch-yaw: R = Rz(yaw) * Ry(pitch) * Rx(roll).
Mat3 rpy_matrix(const Vec3& rpy) {
  return (Eigen::AngleAxisd(rpy.z(), Vec3::UnitZ()) * Eigen::AngleAxisd(rpy.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(rpy.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

struct Pose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  bool has_rotation = false;
};

Pose read_origin(const pt::ptree& element, const std::string& where) {
  Pose pose;
  const auto origin = element.get_child_optional("origin");
  if (!origin) return pose;
  if (auto xyz = origin->get_optional<std::string>("<xmlattr>.xyz")) {
    pose.translation = parse_triple(*xyz, where + " origin xyz");
  }
  if (auto rpy = origin->get_optional<std::string>("<xmlattr>.rpy")) {
    const Vec3 angles = parse_triple(*rpy, where + " origin rpy");
    if (angles != Vec3::Zero()) {
      pose.rotation = rpy_matrix(angles);
      pose.has_rotation = true;
    }
  }
  return pose;
}

struct RawJoint {
  std::string name, parent, child;
  JointType type = JointType::kFixed;
  Pose origin;
  Vec3 axis = Vec3::UnitX();
  double lower = 0, upper = 0;
};

void warn(std::vector<std::string>* warnings, std::string message) {
  if (warnings) warnings->push_back(std::move(message));
}

}  // namespace

std::string format_triple(const Vec3& v) {
  return format_number(v.x()) + " " + format_number(v.y()) + " " + format_number(v.z());
}

MeshLoader obj_loader(const std::filesystem::path& base_dir) {
  return [base_dir](const std::string& filename) {
    std::string rel = filename;
    constexpr std::string_view kPackage = "package://";
    if (rel.rfind(kPackage, 0) == 0) rel = rel.substr(kPackage.size());
    const std::filesystem::path path =
        std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel) : base_dir / rel;
    if (!std::filesystem::exists(path)) {
      throw MeshResolutionError("mesh file not found: " + path.string());
    }
    try {
      return read_obj(path);
    } catch (const Error& e) {
      throw MeshResolutionError("cannot load mesh " + path.string() + ": " + e.what());
    }
  };
}

ArticulatedObject parse_urdf(std::string_view text, const MeshLoader& mesh_loader,
                             std::vector<std::string>* warnings) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error& e) {
    throw UrdfParseError(std::string("malformed URDF XML: ") + e.what());
  }
  const auto robot = tree.get_child_optional("robot");
  if (!robot) throw UrdfParseError("missing <robot> element");

  // Link geometry, still in each link's own frame.
  std::vector<std::string> names;
  std::vector<TriangleMesh> local_meshes;
  std::map<std::string, int> index;
  std::vector<RawJoint> joints;
  for (const auto& [tag, node] : *robot) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (tag == "link") {
      const std::string name = node.get<std::string>("<xmlattr>.name", "");
      if (name.empty()) throw UrdfParseError("link without a name");
      if (index.count(name)) throw InvalidKinematicTree("duplicate link name '" + name + "'");
      std::vector<TriangleMesh> pieces;
      for (const char* kind : {"visual", "collision"}) {
        if (!pieces.empty()) break;
        for (const auto& [child_tag, child] : node) {
          if (child_tag != kind) continue;
          const auto mesh = child.get_child_optional("geometry.mesh");
          if (!mesh) {
            warn(warnings, "link '" + name + "': non-mesh " + kind + " geometry ignored");
            continue;
          }
          const std::string filename = mesh->get<std::string>("<xmlattr>.filename", "");
          if (filename.empty()) throw UrdfParseError("link '" + name + "': mesh without filename");
          TriangleMesh m = mesh_loader(filename);
          if (auto scale = mesh->get_optional<std::string>("<xmlattr>.scale")) {
            const Vec3 s = parse_triple(*scale, "link '" + name + "' mesh scale");
            for (Vec3& v : m.vertices) v = v.cwiseProduct(s);
          }
          const Pose pose = read_origin(child, "link '" + name + "' " + kind);
          for (Vec3& v : m.vertices) v = pose.rotation * v + pose.translation;
          pieces.push_back(std::move(m));
        }
      }
      for (const auto& [child_tag, child] : node) {
        if (child_tag != "visual" && child_tag != "collision" && child_tag != "<xmlattr>" &&
            child_tag != "<xmlcomment>") {
          warn(warnings, "link '" + name + "': unsupported element <" + child_tag + "> ignored");
        }
      }
      index[name] = static_cast<int>(names.size());
      names.push_back(name);
      local_meshes.push_back(pieces.empty() ? TriangleMesh{} : merge_meshes(pieces));
    } else if (tag == "joint") {
      RawJoint j;
      j.name = node.get<std::string>("<xmlattr>.name", "");
      const std::string where = "joint '" + j.name + "'";
      try {
        j.type = parse_joint_type(node.get<std::string>("<xmlattr>.type", ""));
      } catch (const InvalidArgument& e) {
        throw UrdfParseError(where + ": " + e.what());
      }
      j.parent = node.get<std::string>("parent.<xmlattr>.link", "");
      j.child = node.get<std::string>("child.<xmlattr>.link", "");
      if (j.parent.empty() || j.child.empty()) throw UrdfParseError(where + ": missing parent or child");
      j.origin = read_origin(node, where);
      if (auto axis = node.get_optional<std::string>("axis.<xmlattr>.xyz")) {
        j.axis = parse_triple(*axis, where + " axis");
      }
      if (has_limits(j.type)) {
        const auto limit = node.get_child_optional("limit");
        if (!limit) {
          warn(warnings, where + ": no <limit>; using [0, 0]");
        } else {
          j.lower = parse_number(limit->get<std::string>("<xmlattr>.lower", "0"), where + " lower");
          j.upper = parse_number(limit->get<std::string>("<xmlattr>.upper", "0"), where + " upper");
          if (j.lower > j.upper) {
            throw InvalidLimits(where + ": lower " + format_number(j.lower) + " > upper " +
                                format_number(j.upper));
          }
        }
      }
      for (const auto& [child_tag, child] : node) {
        if (child_tag != "origin" && child_tag != "axis" && child_tag != "limit" &&
            child_tag != "parent" && child_tag != "child" && child_tag != "<xmlattr>" &&
            child_tag != "<xmlcomment>") {
          warn(warnings, where + ": unsupported element <" + child_tag + "> ignored");
        }
      }
      joints.push_back(std::move(j));
    } else {
      warn(warnings, "unsupported element <" + tag + "> ignored");
    }
  }
  if (names.empty()) throw InvalidKinematicTree("URDF has no links");

  const int n = static_cast<int>(names.size());
  std::vector<int> joint_of(n, -1);
  for (int k = 0; k < static_cast<int>(joints.size()); ++k) {
    const RawJoint& j = joints[k];
    if (!index.count(j.parent) || !index.count(j.child)) {
      throw InvalidKinematicTree("joint '" + j.name + "' references an unknown link");
    }
    const int c = index[j.child];
    if (joint_of[c] >= 0) throw InvalidKinematicTree("link '" + j.child + "' has two parent joints");
    if (j.parent == j.child) throw InvalidKinematicTree("joint '" + j.name + "' is a self loop");
    joint_of[c] = k;
  }

  ArticulatedObject obj;
  obj.links.resize(n);
  for (int i = 0; i < n; ++i) {
    obj.links[i].name = names[i];
    if (joint_of[i] < 0) continue;
    const RawJoint& j = joints[joint_of[i]];
    JointSpec spec;
    spec.type = j.type;
    spec.parent = index[j.parent];
    spec.lower = j.lower;
    spec.upper = j.upper;
    obj.links[i].joint = spec;
  }
  const std::vector<int> order = topological_order(obj);  // throws on cycles / forests

  // Compose rest poses root-down and re-express everything in object axes.
  std::vector<Mat3> rot(n, Mat3::Identity());
  std::vector<Vec3> pos(n, Vec3::Zero());
  for (int i : order) {
    Link& link = obj.links[i];
    if (link.joint) {
      const RawJoint& j = joints[joint_of[i]];
      const int p = link.joint->parent;
      const bool parent_rotated = !rot[p].isIdentity(0.0);
      link.joint->origin = parent_rotated ? Vec3(rot[p] * j.origin.translation) : j.origin.translation;
      pos[i] = pos[p] + link.joint->origin;
      rot[i] = j.origin.has_rotation ? Mat3(rot[p] * j.origin.rotation) : rot[p];
      link.joint->axis = rot[i].isIdentity(0.0) ? j.axis : Vec3(rot[i] * j.axis);
    }
    link.mesh = std::move(local_meshes[i]);
    const bool rotated = !rot[i].isIdentity(0.0);
    for (Vec3& v : link.mesh.vertices) v = (rotated ? Vec3(rot[i] * v) : v) + pos[i];
  }
  return obj;
}

ArticulatedObject load_urdf(const std::filesystem::path& urdf_path, std::vector<std::string>* warnings) {
  std::ifstream in(urdf_path);
  if (!in) throw IoError("cannot open URDF " + urdf_path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_urdf(ss.str(), obj_loader(urdf_path.parent_path()), warnings);
}

std::string emit_urdf(const ArticulatedObject& obj, const std::filesystem::path& out_dir,
                      std::string_view robot_name) {
  const std::vector<Vec3> rest = rest_frame_positions(obj);
  std::filesystem::create_directories(out_dir / "meshes");
  std::ostringstream out;
  out << "<?xml version=\"1.0\"?>\n";
  out << "<robot name=\"" << robot_name << "\">\n";
  for (int i = 0; i < obj.size(); ++i) {
    const Link& link = obj.links[i];
    const std::string file = "meshes/" + link.name + ".obj";
    write_obj(out_dir / file, link.mesh);
    const std::string origin = "<origin xyz=\"" + format_triple(-rest[i]) + "\" rpy=\"0 0 0\"/>";
    out << "  <link name=\"" << link.name << "\">\n";
    for (const char* kind : {"visual", "collision"}) {
      out << "    <" << kind << ">\n"
          << "      " << origin << "\n"
          << "      <geometry>\n"
          << "        <mesh filename=\"" << file << "\"/>\n"
          << "      </geometry>\n"
          << "    </" << kind << ">\n";
    }
    out << "  </link>\n";
  }
  for (int i = 0; i < obj.size(); ++i) {
    const Link& link = obj.links[i];
    if (!link.joint) continue;
    const JointSpec& j = *link.joint;
    out << "  <joint name=\"joint_" << link.name << "\" type=\"" << joint_type_name(j.type) << "\">\n"
        << "    <parent link=\"" << obj.links[j.parent].name << "\"/>\n"
        << "    <child link=\"" << link.name << "\"/>\n"
        << "    <origin xyz=\"" << format_triple(j.origin) << "\" rpy=\"0 0 0\"/>\n";
    out << "    <axis xyz=\"" << format_triple(j.axis) << "\"/>\n";
    if (has_limits(j.type)) {
      out << "    <limit lower=\"" << format_number(j.lower) << "\" upper=\""
          << format_number(j.upper) << "\" effort=\"100\" velocity=\"1\"/>\n";
    }
    out << "  </joint>\n";
  }
  out << "</robot>\n";
  return out.str();
}

std::filesystem::path save_urdf(const ArticulatedObject& obj, const std::filesystem::path& out_dir,
                                std::string_view robot_name, std::string_view file_name) {
  const std::string text = emit_urdf(obj, out_dir, robot_name);
  const std::filesystem::path path = out_dir / std::string(file_name);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
  return path;
}

}  // namespace urdfgen
