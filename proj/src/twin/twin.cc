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


#include "urdfgen/twin/twin.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/kernels/nearest.h"

namespace urdfgen {

SimilarityTransform estimate_similarity(std::span<const Vec3> source, std::span<const Vec3> target) {
  if (source.size() != target.size()) throw InvalidArgument("estimate_similarity: unpaired point sets");
  const std::size_t n = source.size();
  if (n < 3) throw DegenerateConfiguration("estimate_similarity needs at least 3 pairs");
  Vec3 mx = Vec3::Zero(), my = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    mx += source[i];
    my += target[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  Mat3 cov = Mat3::Zero(), sxx = Mat3::Zero();
  double var_x = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 dx = source[i] - mx;
    cov += (target[i] - my) * dx.transpose();
    sxx += dx * dx.transpose();
    var_x += dx.squaredNorm();
  }
  cov /= static_cast<double>(n);
  var_x /= static_cast<double>(n);
  Eigen::JacobiSVD<Mat3> spread(sxx);
  const auto sv = spread.singularValues();
  if (!(sv(0) > 0) || sv(1) <= 1e-12 * sv(0)) {
    throw DegenerateConfiguration("estimate_similarity: collinear or coincident points");
  }
  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU(), v = svd.matrixV();
  Vec3 s = Vec3::Ones();
  if (u.determinant() * v.determinant() < 0) s(2) = -1;
  SimilarityTransform t;
  t.rotation = u * s.asDiagonal() * v.transpose();
  t.scale = svd.singularValues().dot(s) / var_x;
  if (!(t.scale > 0)) throw DegenerateConfiguration("estimate_similarity: non-positive scale");
  t.translation = my - t.scale * (t.rotation * mx);
  return t;
}

namespace {

// Symmetric point-to-point objective: every moved source point is paired
// with its nearest target point and every target point with its nearest
// moved source point.
struct Pairing {
  std::vector<Vec3> from, to;
  double rms = 0.0;
  double forward_rms = 0.0;
};

Pairing pair_up(std::span<const Vec3> source, const std::vector<Vec3>& moved, const KdTree& target) {
  Pairing p;
  const std::size_t n = source.size(), m = target.points().size();
  p.from.reserve(n + m);
  p.to.reserve(n + m);
  double sum = 0;
  const std::vector<Neighbor> fwd = nearest_neighbors(moved, target);
  for (std::size_t i = 0; i < n; ++i) {
    sum += fwd[i].sq_dist;
    p.from.push_back(source[i]);
    p.to.push_back(target.points()[fwd[i].index]);
  }
  p.forward_rms = std::sqrt(sum / static_cast<double>(n));
  const KdTree moved_tree(moved);
  const std::vector<Neighbor> back = nearest_neighbors(target.points(), moved_tree);
  for (std::size_t j = 0; j < m; ++j) {
    sum += back[j].sq_dist;
    p.from.push_back(source[back[j].index]);
    p.to.push_back(target.points()[j]);
  }
  p.rms = std::sqrt(sum / static_cast<double>(n + m));
  return p;
}

IcpResult icp_with_tree(std::span<const Vec3> source, const KdTree& tree, const SimilarityTransform& init,
                        int max_iter, double tol) {
  IcpResult r;
  std::vector<Vec3> moved(source.size());
  SimilarityTransform cur = init;
  r.transform = init;
  r.rms = std::numeric_limits<double>::infinity();
  for (int it = 0;; ++it) {
    for (std::size_t i = 0; i < source.size(); ++i) moved[i] = cur.apply(source[i]);
    const Pairing pairs = pair_up(source, moved, tree);
    r.history.push_back(pairs.rms);
    const double prev = r.rms;
    if (pairs.rms <= r.rms) {
      r.rms = pairs.rms;
      r.forward_rms = pairs.forward_rms;
      r.transform = cur;
    }
    if (it == max_iter || !(prev - pairs.rms >= tol) || pairs.rms == 0.0) break;
    try {
      cur = estimate_similarity(pairs.from, pairs.to);
    } catch (const DegenerateConfiguration&) {
      break;
    }
    r.iterations = it + 1;
  }
  return r;
}

}  // namespace

IcpResult icp_align(std::span<const Vec3> source, std::span<const Vec3> target, const SimilarityTransform& init,
                    int max_iter, double tol) {
  if (source.empty() || target.empty()) throw InvalidArgument("icp_align needs nonempty clouds");
  const KdTree tree(target);
  return icp_with_tree(source, tree, init, max_iter, tol);
}

PlacedTwin build_twin(const ArticulatedObject& generated, std::span<const Vec3> observed_camera,
                      const SimilarityTransform& camera_to_world, const TwinConfig& cfg, std::string source_id) {
  if (observed_camera.empty()) throw AlignmentRejected("observed cloud is empty");
  if (cfg.yaw_starts <= 0 || cfg.sample_points <= 0) throw InvalidArgument("twin config values must be positive");
  std::vector<Vec3> observed(observed_camera.size());
  for (std::size_t i = 0; i < observed.size(); ++i) observed[i] = camera_to_world.apply(observed_camera[i]);
  const std::vector<Vec3> source = sample_surface(merged_mesh(generated), cfg.sample_points, cfg.seed).points;

  auto centroid_radius = [](std::span<const Vec3> pts) {
    Vec3 c = Vec3::Zero();
    for (const Vec3& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    double r = 0;
    for (const Vec3& p : pts) r += (p - c).squaredNorm();
    return std::make_pair(c, std::sqrt(r / static_cast<double>(pts.size())));
  };
  const auto [cs, rs] = centroid_radius(source);
  const auto [co, ro] = centroid_radius(observed);
  const KdTree tree(observed);

  std::vector<IcpResult> starts(cfg.yaw_starts);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < cfg.yaw_starts; ++k) {
    SimilarityTransform init;
    init.rotation = Eigen::AngleAxisd(2 * std::numbers::pi * k / cfg.yaw_starts, Vec3::UnitZ()).toRotationMatrix();
    init.scale = rs > 0 ? ro / rs : 1.0;
    init.translation = co - init.scale * (init.rotation * cs);
    starts[k] = icp_with_tree(source, tree, init, cfg.max_iter, cfg.tol);
  }
  int best = 0;
  for (int k = 1; k < cfg.yaw_starts; ++k) {
    if (starts[k].rms < starts[best].rms) best = k;
  }
  const IcpResult& r = starts[best];
  if (!(r.forward_rms <= cfg.max_rms)) {
    std::ostringstream msg;
    msg << "alignment residual " << r.forward_rms << " exceeds " << cfg.max_rms << " (best of " << cfg.yaw_starts
        << " starts, scale " << r.transform.scale << ")";
    throw AlignmentRejected(msg.str());
  }
  PlacedTwin twin;
  twin.scale = r.transform.scale;
  twin.rms = r.forward_rms;
  SimilarityTransform scaling;
  scaling.scale = twin.scale;
  twin.object = apply_similarity(generated, scaling);
  twin.world_pose.rotation = r.transform.rotation;
  twin.world_pose.translation = r.transform.translation;
  twin.source_id = std::move(source_id);
  return twin;
}

namespace {

std::vector<Vec3> read_xyz(std::istream& in, const std::string& name) {
  std::vector<Vec3> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Vec3 p;
    if (!(ls >> p.x() >> p.y() >> p.z())) {
      throw IoError(name + ":" + std::to_string(lineno) + ": expected three coordinates");
    }
    pts.push_back(p);
  }
  return pts;
}

int ply_type_size(const std::string& t) {
  if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
  if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
  if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" || t == "float32") return 4;
  if (t == "double" || t == "float64") return 8;
  return 0;
}

double ply_read_scalar(const char* p, const std::string& t) {
  auto get = [p](auto v) {
    std::memcpy(&v, p, sizeof(v));
    return static_cast<double>(v);
  };
  if (t == "char" || t == "int8") return get(std::int8_t{});
  if (t == "uchar" || t == "uint8") return get(std::uint8_t{});
  if (t == "short" || t == "int16") return get(std::int16_t{});
  if (t == "ushort" || t == "uint16") return get(std::uint16_t{});
  if (t == "int" || t == "int32") return get(std::int32_t{});
  if (t == "uint" || t == "uint32") return get(std::uint32_t{});
  if (t == "float" || t == "float32") return get(float{});
  return get(double{});
}

std::vector<Vec3> read_ply(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply") throw IoError(name + ": missing ply magic");
  std::string format;
  long count = -1;
  bool in_vertex = false, seen_vertex = false;
  std::vector<std::pair<std::string, std::string>> props;  // (type, name)
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "format") {
      ls >> format;
    } else if (kw == "element") {
      std::string el;
      long n = 0;
      ls >> el >> n;
      in_vertex = el == "vertex";
      if (in_vertex) {
        if (seen_vertex) throw IoError(name + ": duplicate vertex element");
        count = n;
        seen_vertex = true;
      } else if (!seen_vertex) {
        throw IoError(name + ": vertex element must come first");
      }
    } else if (kw == "property" && in_vertex) {
      std::string type, pname;
      ls >> type >> pname;
      if (type == "list" || ply_type_size(type) == 0) throw IoError(name + ": unsupported vertex property " + line);
      props.push_back({type, pname});
    } else if (kw == "end_header") {
      break;
    }
  }
  if (count < 0) throw IoError(name + ": no vertex element");
  int ix = -1, iy = -1, iz = -1;
  for (int i = 0; i < static_cast<int>(props.size()); ++i) {
    if (props[i].second == "x") ix = i;
    if (props[i].second == "y") iy = i;
    if (props[i].second == "z") iz = i;
  }
  if (ix < 0 || iy < 0 || iz < 0) throw IoError(name + ": vertex needs x, y and z");
  std::vector<Vec3> pts;
  pts.reserve(static_cast<std::size_t>(count));
  if (format == "ascii") {
    for (long v = 0; v < count; ++v) {
      std::vector<double> vals(props.size());
      for (double& x : vals) {
        if (!(in >> x)) throw IoError(name + ": truncated vertex data");
      }
      pts.emplace_back(vals[ix], vals[iy], vals[iz]);
    }
  } else if (format == "binary_little_endian") {
    std::vector<int> offset(props.size());
    int stride = 0;
    for (std::size_t i = 0; i < props.size(); ++i) {
      offset[i] = stride;
      stride += ply_type_size(props[i].first);
    }
    std::vector<char> buf(stride);
    for (long v = 0; v < count; ++v) {
      if (!in.read(buf.data(), stride)) throw IoError(name + ": truncated vertex data");
      pts.emplace_back(ply_read_scalar(buf.data() + offset[ix], props[ix].first),
                       ply_read_scalar(buf.data() + offset[iy], props[iy].first),
                       ply_read_scalar(buf.data() + offset[iz], props[iz].first));
    }
  } else {
    throw IoError(name + ": unsupported ply format '" + format + "'");
  }
  return pts;
}

}  // namespace

std::vector<Vec3> read_point_cloud(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".ply") return read_ply(in, path.string());
  if (ext == ".xyz" || ext == ".txt") return read_xyz(in, path.string());
  throw IoError(path.string() + ": unknown point cloud extension");
}

void write_xyz(const std::filesystem::path& path, std::span<const Vec3> points) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[96];
  for (const Vec3& p : points) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
}

void write_ply(const std::filesystem::path& path, std::span<const Vec3> points) {
  static_assert(std::endian::native == std::endian::little);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "ply\nformat binary_little_endian 1.0\nelement vertex " << points.size()
      << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (const Vec3& p : points) {
    const float f[3] = {static_cast<float>(p.x()), static_cast<float>(p.y()), static_cast<float>(p.z())};
    out.write(reinterpret_cast<const char*>(f), sizeof(f));
  }
}

nlohmann::json placement_json(const std::string& urdf_path, const PlacedTwin& twin) {
  nlohmann::json rot = nlohmann::json::array(), trans = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(twin.world_pose.rotation(r, c));
    trans.push_back(twin.world_pose.translation(r));
  }
  return {{"urdf_path", urdf_path},
          {"scale", twin.scale},
          {"rotation", rot},
          {"translation", trans},
          {"rms_residual", twin.rms}};
}

SimilarityTransform read_pose_json(const nlohmann::json& j) {
  SimilarityTransform t;
  try {
    const auto& rot = j.at("rotation");
    const auto& trans = j.at("translation");
    if (rot.size() != 9 || trans.size() != 3) throw SchemaError("pose needs 9 rotation and 3 translation values");
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) t.rotation(r, c) = rot.at(3 * r + c).get<double>();
      t.translation(r) = trans.at(r).get<double>();
    }
    t.scale = j.value("scale", 1.0);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("pose: ") + e.what());
  }
  if (!(t.rotation.transpose() * t.rotation).isApprox(Mat3::Identity(), 1e-6) || t.rotation.determinant() < 0) {
    throw SchemaError("pose rotation is not a proper rotation");
  }
  if (!(t.scale > 0)) throw SchemaError("pose scale must be positive");
  return t;
}

}  // namespace urdfgen
