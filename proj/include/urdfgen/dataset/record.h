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


#ifndef URDFGEN_DATASET_RECORD_H_
#define URDFGEN_DATASET_RECORD_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urdfgen/geometry/mesh.h"
#include "urdfgen/urdf/model.h"
#include "urdfgen/urdf/urdf_io.h"

namespace urdfgen {

// Two parts whose bounding-box minima differ by at most this much (normalized
// units) along an axis are treated as level on that axis.
inline constexpr double kDefaultOrderTolerance = 0.02;

// One entry of the "links" array. The joint fields are present on every link
// except the base.
struct LinkEntry {
  struct Joint {
    Vec3 origin = Vec3::Zero();
    Vec3 axis = Vec3::UnitX();
    JointType type = JointType::kFixed;
    double lower = 0.0;
    double upper = 0.0;

    bool operator==(const Joint&) const = default;
  };

  std::string name;
  std::string obj;  // path relative to the record file
  std::optional<Joint> joint;

  bool operator==(const LinkEntry&) const = default;
};

struct DatasetRecord {
  std::string id;
  std::optional<std::string> whole_image;
  std::string urdf;
  std::vector<LinkEntry> links;

  bool operator==(const DatasetRecord&) const = default;
};

// Strict schema: keys id, whole_image (optional), urdf, links; per link name,
// obj and either none or all of origin_xyz, axis_xyz, motion_type (plus lower
// and upper for limited types). Exactly one link may lack joint fields.
// Throws SchemaError.
DatasetRecord parse_record(std::string_view json_text);
std::string record_to_json(const DatasetRecord& record);

// Builds the object in record order with every joint attached to the base.
// Meshes are not normalized.
ArticulatedObject record_object(const DatasetRecord& record, const MeshLoader& loader);

// Reads the record, loads the OBJ files next to it and normalizes all links
// with one shared transform. Throws SchemaError, MeshResolutionError or
// IoError.
std::pair<DatasetRecord, ArticulatedObject> load_record(const std::filesystem::path& json_path);

// Record describing `obj` (flat tree required) with meshes under objs/.
DatasetRecord make_record(const std::string& id, const ArticulatedObject& obj);
// Writes record.json, objs/<link>.obj and the URDF named by record.urdf into dir.
std::filesystem::path save_record(const std::filesystem::path& dir, const DatasetRecord& record,
                                  const ArticulatedObject& obj);

// One similarity over the merged geometry so that the whole object fits
// [-1, 1]^3 with its bounding box centered at the origin.
ArticulatedObject normalize_object(const ArticulatedObject& obj);
// Thickens every non-watertight link mesh.
ArticulatedObject thicken_object(const ArticulatedObject& obj,
                                 double offset = kDefaultThickeningOffset);

// Base link first, then movable links ordered by bounding-box minimum Z, X
// and Y. Values are grouped by single-linkage chaining at `tol` on each axis
// before falling through to the next, and names break the remaining ties, so
// the result does not depend on the input order.
ArticulatedObject canonical_link_order(const ArticulatedObject& obj,
                                       double tol = kDefaultOrderTolerance);

}  // namespace urdfgen

#endif  // URDFGEN_DATASET_RECORD_H_
