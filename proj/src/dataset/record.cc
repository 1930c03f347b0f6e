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


#include "urdfgen/dataset/record.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/geometry/obj_io.h"

namespace urdfgen {
namespace {

using nlohmann::json;

Vec3 parse_triple_string(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  Vec3 v;
  std::string token;
  for (int i = 0; i < 3; ++i) {
    if (!(in >> token)) throw SchemaError(key + ": expected three numbers in \"" + text + "\"");
    char* end = nullptr;
    v[i] = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size()) {
      throw SchemaError(key + ": bad number \"" + token + "\"");
    }
  }
  if (in >> token) throw SchemaError(key + ": trailing data in \"" + text + "\"");
  return v;
}

const json& require(const json& obj, const char* key, json::value_t type, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing key \"" + key + "\"");
  const bool number_ok = type == json::value_t::number_float && it->is_number();
  if (!number_ok && it->type() != type) throw SchemaError(where + ": wrong type for \"" + key + "\"");
  return *it;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SchemaError(where + ": unknown key \"" + key + "\"");
    }
  }
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Single-linkage grouping of `members` by value: members sorted ascending and
// split wherever consecutive values differ by more than tol.
std::vector<std::vector<int>> chain_groups(std::vector<int> members, const std::vector<double>& value,
                                           double tol) {
  std::sort(members.begin(), members.end(), [&](int a, int b) { return value[a] < value[b]; });
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i == 0 || value[members[i]] - value[members[i - 1]] > tol) groups.emplace_back();
    groups.back().push_back(members[i]);
  }
  return groups;
}

}  // namespace

DatasetRecord parse_record(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("record is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("record must be a JSON object");
  reject_unknown(root, {"id", "whole_image", "urdf", "links"}, "record");

  DatasetRecord record;
  record.id = require(root, "id", json::value_t::string, "record").get<std::string>();
  const std::string where = "record " + record.id;
  record.urdf = require(root, "urdf", json::value_t::string, where).get<std::string>();
  if (root.contains("whole_image")) {
    record.whole_image = require(root, "whole_image", json::value_t::string, where).get<std::string>();
  }
  const json& links = require(root, "links", json::value_t::array, where);
  if (links.empty()) throw SchemaError(where + ": no links");

  int bases = 0;
  for (const json& item : links) {
    if (!item.is_object()) throw SchemaError(where + ": link entries must be objects");
    reject_unknown(item, {"name", "obj", "origin_xyz", "axis_xyz", "motion_type", "lower", "upper"}, where);
    LinkEntry entry;
    entry.name = require(item, "name", json::value_t::string, where).get<std::string>();
    const std::string at = where + " link " + entry.name;
    entry.obj = require(item, "obj", json::value_t::string, at).get<std::string>();
    const int joint_keys = static_cast<int>(item.contains("origin_xyz")) +
                           static_cast<int>(item.contains("axis_xyz")) +
                           static_cast<int>(item.contains("motion_type"));
    if (joint_keys == 0) {
      if (item.contains("lower") || item.contains("upper")) {
        throw SchemaError(at + ": limits without a joint");
      }
      ++bases;
    } else if (joint_keys != 3) {
      throw SchemaError(at + ": incomplete joint fields");
    } else {
      LinkEntry::Joint j;
      j.origin = parse_triple_string(require(item, "origin_xyz", json::value_t::string, at), "origin_xyz");
      j.axis = parse_triple_string(require(item, "axis_xyz", json::value_t::string, at), "axis_xyz");
      try {
        j.type = parse_joint_type(require(item, "motion_type", json::value_t::string, at).get<std::string>());
      } catch (const InvalidArgument& e) {
        throw SchemaError(at + ": " + e.what());
      }
      if (has_limits(j.type)) {
        j.lower = require(item, "lower", json::value_t::number_float, at).get<double>();
        j.upper = require(item, "upper", json::value_t::number_float, at).get<double>();
      } else if (item.contains("lower") || item.contains("upper")) {
        throw SchemaError(at + ": limits on an unlimited joint type");
      }
      entry.joint = j;
    }
    record.links.push_back(std::move(entry));
  }
  if (bases != 1) {
    throw SchemaError(where + ": expected exactly one link without joint fields, found " +
                      std::to_string(bases));
  }
  return record;
}

std::string record_to_json(const DatasetRecord& record) {
  // Built by hand so doubles keep 17 significant digits and key order matches
  // the data format.
  std::ostringstream out;
  out << "{\n  \"id\": " << json(record.id).dump() << ",\n";
  if (record.whole_image) out << "  \"whole_image\": " << json(*record.whole_image).dump() << ",\n";
  out << "  \"urdf\": " << json(record.urdf).dump() << ",\n  \"links\": [";
  for (std::size_t i = 0; i < record.links.size(); ++i) {
    const LinkEntry& l = record.links[i];
    out << (i ? ",\n" : "\n") << "    {\n      \"name\": " << json(l.name).dump()
        << ",\n      \"obj\": " << json(l.obj).dump();
    if (l.joint) {
      out << ",\n      \"origin_xyz\": \"" << format_triple(l.joint->origin) << "\""
          << ",\n      \"axis_xyz\": \"" << format_triple(l.joint->axis) << "\""
          << ",\n      \"motion_type\": \"" << joint_type_name(l.joint->type) << "\"";
      if (has_limits(l.joint->type)) {
        out << ",\n      \"lower\": " << number(l.joint->lower) << ",\n      \"upper\": "
            << number(l.joint->upper);
      }
    }
    out << "\n    }";
  }
  out << "\n  ]\n}\n";
  return out.str();
}

ArticulatedObject record_object(const DatasetRecord& record, const MeshLoader& loader) {
  ArticulatedObject obj;
  int base = -1;
  for (std::size_t i = 0; i < record.links.size(); ++i) {
    if (!record.links[i].joint) base = static_cast<int>(i);
  }
  if (base < 0) throw SchemaError("record " + record.id + ": no base link");
  for (const LinkEntry& entry : record.links) {
    Link link;
    link.name = entry.name;
    link.mesh = loader(entry.obj);
    if (entry.joint) {
      if (entry.joint->lower > entry.joint->upper) {
        throw SchemaError("record " + record.id + " link " + entry.name + ": lower > upper");
      }
      link.joint = JointSpec{entry.joint->origin, entry.joint->axis, entry.joint->type,
                             entry.joint->lower, entry.joint->upper, base};
    }
    obj.links.push_back(std::move(link));
  }
  return obj;
}

std::pair<DatasetRecord, ArticulatedObject> load_record(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot read " + json_path.string());
  std::stringstream text;
  text << in.rdbuf();
  DatasetRecord record = parse_record(text.str());
  ArticulatedObject obj = record_object(record, obj_loader(json_path.parent_path()));
  return {std::move(record), normalize_object(obj)};
}

DatasetRecord make_record(const std::string& id, const ArticulatedObject& obj) {
  DatasetRecord record;
  record.id = id;
  record.urdf = "object.urdf";
  const int root = obj.root();
  for (const Link& link : obj.links) {
    LinkEntry entry;
    entry.name = link.name;
    entry.obj = "objs/" + link.name + ".obj";
    if (link.joint) {
      if (link.joint->parent != root) {
        throw InvalidArgument("make_record: link " + link.name + " is not attached to the base");
      }
      entry.joint = LinkEntry::Joint{link.joint->origin, link.joint->axis, link.joint->type,
                                     link.joint->lower, link.joint->upper};
    }
    record.links.push_back(std::move(entry));
  }
  return record;
}

std::filesystem::path save_record(const std::filesystem::path& dir, const DatasetRecord& record,
                                  const ArticulatedObject& obj) {
  std::filesystem::create_directories(dir / "objs");
  for (std::size_t i = 0; i < record.links.size(); ++i) {
    write_obj(dir / record.links[i].obj, obj.links[i].mesh);
  }
  save_urdf(obj, dir, record.id, record.urdf);
  const auto path = dir / "record.json";
  std::ofstream out(path);
  out << record_to_json(record);
  if (!out) throw IoError("cannot write " + path.string());
  return path;
}

ArticulatedObject normalize_object(const ArticulatedObject& obj) {
  Aabb box;
  for (const Link& link : obj.links) box.extend(bounds(link.mesh));
  if (!box.valid()) throw InvalidMesh("normalize_object: object has no vertices");
  return apply_similarity(obj, unit_cube_transform(box));
}

ArticulatedObject thicken_object(const ArticulatedObject& obj, double offset) {
  ArticulatedObject out = obj;
  for (Link& link : out.links) {
    if (!is_watertight(link.mesh)) link.mesh = thicken_mesh(link.mesh, offset);
  }
  return out;
}

ArticulatedObject canonical_link_order(const ArticulatedObject& obj, double tol) {
  const int n = obj.size();
  const int root = obj.root();
  std::vector<double> mins[3];
  for (auto& m : mins) m.resize(n);
  for (int i = 0; i < n; ++i) {
    const Aabb box = bounds(obj.links[i].mesh);
    for (int a = 0; a < 3; ++a) mins[a][i] = box.min[a];
  }

  std::vector<int> order{root};
  const int axes[3] = {2, 0, 1};
  auto place = [&](auto&& self, std::vector<int> members, int level) -> void {
    if (level == 3) {
      std::sort(members.begin(), members.end(),
                [&](int a, int b) { return obj.links[a].name < obj.links[b].name; });
      order.insert(order.end(), members.begin(), members.end());
      return;
    }
    for (auto& group : chain_groups(std::move(members), mins[axes[level]], tol)) {
      self(self, std::move(group), level + 1);
    }
  };
  std::vector<int> movable;
  for (int i = 0; i < n; ++i) {
    if (i != root) movable.push_back(i);
  }
  place(place, movable, 0);

  std::vector<int> new_index(n);
  for (int i = 0; i < n; ++i) new_index[order[i]] = i;
  ArticulatedObject out;
  out.links.reserve(n);
  for (int old : order) {
    Link link = obj.links[old];
    if (link.joint) link.joint->parent = new_index[link.joint->parent];
    out.links.push_back(std::move(link));
  }
  return out;
}

}  // namespace urdfgen
