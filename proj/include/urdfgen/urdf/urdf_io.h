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


#ifndef URDFGEN_URDF_URDF_IO_H_
#define URDFGEN_URDF_URDF_IO_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "urdfgen/urdf/model.h"

namespace urdfgen {

// Resolves a mesh `filename` attribute to geometry. Throws
// MeshResolutionError when the mesh cannot be found.
using MeshLoader = std::function<TriangleMesh(const std::string& filename)>;

// Loader reading OBJ files relative to `base_dir`; a leading "package://" is
// stripped.
MeshLoader obj_loader(const std::filesystem::path& base_dir);

// Parses the supported subset: robot/link/{visual,collision}/{origin,geometry/mesh}
// and robot/joint/{origin,axis,limit,parent,child}. Joint and visual rpy
// rotations are composed on ingest into the object-aligned frame convention
// of ArticulatedObject. Link meshes come from the visual elements (collision
// meshes are used only when a link has no visual). Unsupported elements are
// skipped and reported through `warnings`.
// Errors: malformed XML -> UrdfParseError; cycles, several roots or unknown
// link references -> InvalidKinematicTree; lower > upper -> InvalidLimits;
// missing mesh -> MeshResolutionError.
ArticulatedObject parse_urdf(std::string_view text, const MeshLoader& mesh_loader,
                             std::vector<std::string>* warnings = nullptr);

ArticulatedObject load_urdf(const std::filesystem::path& urdf_path,
                            std::vector<std::string>* warnings = nullptr);

// Writes one OBJ per link into out_dir/meshes (object-frame coordinates) and
// returns the URDF text referencing them as "meshes/<link>.obj". Numbers are
// printed with 17 significant digits; output is byte-stable.
std::string emit_urdf(const ArticulatedObject& obj, const std::filesystem::path& out_dir,
                      std::string_view robot_name = "object");

// emit_urdf plus writing the text to out_dir/<file_name>. Returns the URDF path.
std::filesystem::path save_urdf(const ArticulatedObject& obj, const std::filesystem::path& out_dir,
                                std::string_view robot_name = "object",
                                std::string_view file_name = "object.urdf");

// "%.17g" formatting of a triple, space separated.
std::string format_triple(const Vec3& v);

}  // namespace urdfgen

#endif  // URDFGEN_URDF_URDF_IO_H_
