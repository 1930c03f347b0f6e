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


#ifndef URDFGEN_GEOMETRY_OBJ_IO_H_
#define URDFGEN_GEOMETRY_OBJ_IO_H_

#include <filesystem>
#include <iosfwd>

#include "urdfgen/geometry/types.h"

namespace urdfgen {

// Wavefront OBJ subset: `v` and `f` records are used, `vn`/`vt` references
// in faces are accepted and ignored, polygons are fan-triangulated, negative
// (relative) indices are resolved. Other records are skipped.
TriangleMesh read_obj(std::istream& in);
TriangleMesh read_obj(const std::filesystem::path& path);

// Writes `v` lines with 9 significant digits, one `vn` per face, and
// `f v//vn` triangles.
void write_obj(std::ostream& out, const TriangleMesh& mesh);
void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

}  // namespace urdfgen

#endif  // URDFGEN_GEOMETRY_OBJ_IO_H_
