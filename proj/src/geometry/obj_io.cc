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


#include "urdfgen/geometry/obj_io.h"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"

namespace urdfgen {
namespace {

int resolve_index(const std::string& token, int vertex_count, int line_no) {
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw IoError("OBJ line " + std::to_string(line_no) + ": bad face index '" + token + "'");
  }
  if (idx > 0) return idx - 1;
  if (idx < 0) return vertex_count + idx;
  throw IoError("OBJ line " + std::to_string(line_no) + ": face index 0");
}

}  // namespace

TriangleMesh read_obj(std::istream& in) {
  TriangleMesh mesh;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) {
        throw IoError("OBJ line " + std::to_string(line_no) + ": malformed vertex");
      }
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      const int nv = static_cast<int>(mesh.vertices.size());
      while (ls >> tok) poly.push_back(resolve_index(tok, nv, line_no));
      if (poly.size() < 3) {
        throw IoError("OBJ line " + std::to_string(line_no) + ": face with fewer than 3 vertices");
      }
      for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
        mesh.triangles.push_back({poly[0], poly[k], poly[k + 1]});
      }
    }
  }
  check_indices(mesh);
  return mesh;
}

TriangleMesh read_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open OBJ file " + path.string());
  try {
    return read_obj(in);
  } catch (const Error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
  char buf[128];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "v %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (int i = 0; i < static_cast<int>(mesh.triangles.size()); ++i) {
    const Vec3 n = triangle_normal(mesh, i);
    std::snprintf(buf, sizeof(buf), "vn %.9g %.9g %.9g\n", n.x(), n.y(), n.z());
    out << buf;
  }
  for (int i = 0; i < static_cast<int>(mesh.triangles.size()); ++i) {
    const Triangle& t = mesh.triangles[i];
    out << "f " << t[0] + 1 << "//" << i + 1 << ' ' << t[1] + 1 << "//" << i + 1 << ' '
        << t[2] + 1 << "//" << i + 1 << '\n';
  }
}

void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write OBJ file " + path.string());
  write_obj(out, mesh);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace urdfgen
