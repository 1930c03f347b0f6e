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


#include "urdfgen/codec/codec.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>

#include <Eigen/Eigenvalues>

#include "urdfgen/common/error.h"
#include "urdfgen/kernels/grid_eval.h"
#include "urdfgen/kernels/nearest.h"

namespace urdfgen {
namespace {

constexpr int kBlendAnchors = 8;
// Sharpness of the soft maximum over plane distances, per unit length.
constexpr double kMaxTilt = 1000.0;

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a.x() != b.x()) return a.x() < b.x();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.z() < b.z();
}

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
  }
  return v;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  v = to_le(v);
  out.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), 4)) throw IoError("truncated LSC1 stream");
  return to_le(v);
}

}  // namespace

void CodecConfig::validate() const {
  if (m_tokens < 4) throw InvalidArgument("m_tokens must be at least 4");
  if (n_sample_points < m_tokens) throw InvalidArgument("n_sample_points must be >= m_tokens");
  if (feature_width < kTokenFeatures) {
    throw InvalidArgument("feature_width must be at least " + std::to_string(kTokenFeatures));
  }
}

LatentShapeCode LatentShapeCode::zeros(int m, int width) {
  return {m, width, std::vector<float>(static_cast<std::size_t>(m) * width, 0.0f)};
}

bool LatentShapeCode::all_finite() const {
  return std::all_of(data.begin(), data.end(), [](float v) { return std::isfinite(v); });
}

double LatentShapeCode::rms() const {
  if (data.empty()) return 0.0;
  double sum = 0;
  for (float v : data) sum += static_cast<double>(v) * v;
  return std::sqrt(sum / static_cast<double>(data.size()));
}

std::vector<int> farthest_point_sample(std::span<const Vec3> points, int m, int start) {
  const int n = static_cast<int>(points.size());
  if (m < 0 || m > n) {
    throw InvalidArgument("cannot draw " + std::to_string(m) + " samples from " +
                          std::to_string(n) + " points");
  }
  if (m == 0) return {};
  if (start < 0 || start >= n) throw InvalidArgument("farthest point start index out of range");
  std::vector<int> picked;
  picked.reserve(m);
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  int current = start;
  for (int s = 0; s < m; ++s) {
    picked.push_back(current);
    dist[current] = -1.0;  // never chosen again
    int best = -1;
    double best_d = -1.0;
    for (int i = 0; i < n; ++i) {
      if (dist[i] < 0) continue;
      dist[i] = std::min(dist[i], squared_distance(points[i], points[current]));
      if (dist[i] > best_d) {
        best_d = dist[i];
        best = i;
      }
    }
    current = best;
  }
  return picked;
}

std::vector<int> farthest_point_sample(const OrientedPointCloud& cloud, int m, std::uint64_t seed) {
  const int n = static_cast<int>(cloud.size());
  if (m > n) {
    throw InvalidArgument("cannot draw " + std::to_string(m) + " samples from " +
                          std::to_string(n) + " points");
  }
  if (n == 0) return {};
  std::mt19937_64 rng(seed);
  const int start = std::uniform_int_distribution<int>(0, n - 1)(rng);
  return farthest_point_sample(std::span<const Vec3>(cloud.points), m, start);
}

LatentShapeCode encode(const OrientedPointCloud& cloud, const CodecConfig& cfg) {
  cfg.validate();
  const int n = static_cast<int>(cloud.size());
  if (n != cfg.n_sample_points || cloud.normals.size() != cloud.points.size()) {
    throw InvalidArgument("encode expects " + std::to_string(cfg.n_sample_points) +
                          " oriented points, got " + std::to_string(n));
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (cloud.points[a] != cloud.points[b]) return lex_less(cloud.points[a], cloud.points[b]);
    return lex_less(cloud.normals[a], cloud.normals[b]);
  });
  std::vector<Vec3> pts(n), nrm(n);
  for (int i = 0; i < n; ++i) {
    pts[i] = cloud.points[order[i]];
    nrm[i] = cloud.normals[order[i]];
  }

  const std::vector<int> anchors = farthest_point_sample(std::span<const Vec3>(pts), cfg.m_tokens, 0);
  const KdTree tree(pts);
  const int k = cfg.neighborhood();

  std::vector<std::array<float, kTokenFeatures>> rows(cfg.m_tokens);
  for (int t = 0; t < cfg.m_tokens; ++t) {
    const int a = anchors[t];
    const std::vector<Neighbor> nbrs = tree.knn(pts[a], k);
    Vec3 normal_sum = Vec3::Zero();
    Vec3 mean = Vec3::Zero();
    for (const Neighbor& nb : nbrs) {
      if (nrm[nb.index].dot(nrm[a]) > 0) normal_sum += nrm[nb.index];
      mean += pts[nb.index];
    }
    mean /= static_cast<double>(nbrs.size());
    const double len = normal_sum.norm();
    const Vec3 normal = len > 0 ? Vec3(normal_sum / len) : nrm[a];
    Mat3 cov = Mat3::Zero();
    for (const Neighbor& nb : nbrs) {
      const Vec3 d = pts[nb.index] - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size());
    const Vec3 eig = Eigen::SelfAdjointEigenSolver<Mat3>(cov, Eigen::EigenvaluesOnly).eigenvalues();
    const double radius = std::sqrt(nbrs.back().sq_dist);

    auto& row = rows[t];
    for (int c = 0; c < 3; ++c) {
      row[c] = static_cast<float>(pts[a][c]);
      row[3 + c] = static_cast<float>(normal[c]);
      row[7 + c] = static_cast<float>(std::max(eig[c], 0.0));
    }
    row[6] = static_cast<float>(radius);
  }
  std::sort(rows.begin(), rows.end());

  LatentShapeCode code = LatentShapeCode::zeros(cfg.m_tokens, cfg.feature_width);
  for (int t = 0; t < cfg.m_tokens; ++t) {
    for (int c = 0; c < kTokenFeatures; ++c) code.at(t, c) = rows[t][c];
  }
  return code;
}

SdfDecoder::SdfDecoder(const LatentShapeCode& code) {
  if (code.width < 6) throw InvalidArgument("latent width too small to carry anchors");
  for (int t = 0; t < code.m; ++t) {
    const Vec3 n = code.normal(t);
    const double len = n.norm();
    if (!(len > 1e-12) || !std::isfinite(len)) continue;
    const Vec3 a = code.anchor(t);
    if (!a.allFinite()) continue;
    anchors_.push_back(a);
    normals_.push_back(n / len);
  }
}

double SdfDecoder::operator()(const Vec3& query) const {
  const int n = static_cast<int>(anchors_.size());
  if (n == 0) return std::numeric_limits<double>::infinity();

  // Keep the kBlendAnchors + 1 nearest anchors, ordered by (distance, index).
  std::array<std::pair<double, int>, kBlendAnchors + 1> near;
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const std::pair<double, int> cand{squared_distance(query, anchors_[i]), i};
    if (count < kBlendAnchors + 1) {
      near[count++] = cand;
      std::push_heap(near.begin(), near.begin() + count);
    } else if (cand < near[0]) {
      std::pop_heap(near.begin(), near.begin() + count);
      near[count - 1] = cand;
      std::push_heap(near.begin(), near.begin() + count);
    }
  }
  std::sort_heap(near.begin(), near.begin() + count);

  const int used = std::min(count, kBlendAnchors);
  auto plane = [&](int slot) {
    const int i = near[slot].second;
    return normals_[i].dot(query - anchors_[i]);
  };
  if (near[0].first == 0.0) return plane(0);

  // Inverse-square-distance weights, tapered to zero at the next anchor so the
  // field stays continuous when the neighbor set changes, and tilted toward
  // the largest plane distance so a convex patch is not pulled inward by
  // anchors on adjacent faces.
  double planes[kBlendAnchors];
  double top = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < used; ++s) {
    planes[s] = plane(s);
    top = std::max(top, planes[s]);
  }
  const double cutoff = count > kBlendAnchors ? 1.0 / near[kBlendAnchors].first : 0.0;
  double wsum = 0, acc = 0;
  for (int s = 0; s < used; ++s) {
    const double w = (1.0 / near[s].first - cutoff) * std::exp(kMaxTilt * (planes[s] - top));
    wsum += w;
    acc += w * planes[s];
  }
  if (!(wsum > 0)) {
    // Every blend anchor ties with the cutoff anchor.
    acc = 0;
    for (int s = 0; s < used; ++s) acc += planes[s];
    return acc / used;
  }
  return acc / wsum;
}

double decode_sdf(const LatentShapeCode& code, const Vec3& query) { return SdfDecoder(code)(query); }

TriangleMesh extract_mesh(const LatentShapeCode& code, int resolution) {
  if (resolution < 16) throw InvalidArgument("extraction resolution must be at least 16");
  const SdfDecoder decoder(code);
  if (decoder.empty()) throw EmptySurface("latent carries no oriented anchors");

  const int r = resolution;
  NodeLattice lattice{{r, r, r}, Vec3::Constant(-kExtractionHalfExtent),
                      2.0 * kExtractionHalfExtent / (r - 1)};
  std::vector<double> values = evaluate_lattice_parallel(lattice, decoder);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      for (int k = 0; k < r; ++k) {
        double& v = values[lattice.index(i, j, k)];
        const bool boundary = i == 0 || j == 0 || k == 0 || i == r - 1 || j == r - 1 || k == r - 1;
        if (boundary && !(v > 0)) v = std::numeric_limits<double>::min();
        if (v == 0.0) v = std::numeric_limits<double>::min();  // zero counts as outside
      }
    }
  }

  // Cube corner c = (dx, dy, dz) bits; six tetrahedra around the 0-7 diagonal.
  static constexpr int kTets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                                      {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};
  const std::uint64_t n_nodes = lattice.size();
  TriangleMesh mesh;
  std::unordered_map<std::uint64_t, int> edge_vertex;

  std::size_t ids[8];
  Vec3 pos[8];
  for (int i = 0; i + 1 < r; ++i) {
    for (int j = 0; j + 1 < r; ++j) {
      for (int k = 0; k + 1 < r; ++k) {
        for (int c = 0; c < 8; ++c) {
          const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
          ids[c] = lattice.index(i + di, j + dj, k + dk);
          pos[c] = lattice.node(i + di, j + dj, k + dk);
        }
        for (const auto& tet : kTets) {
          int inside[4], outside[4];
          int n_in = 0, n_out = 0;
          for (int v : tet) {
            if (values[ids[v]] < 0) {
              inside[n_in++] = v;
            } else {
              outside[n_out++] = v;
            }
          }
          if (n_in == 0 || n_out == 0) continue;

          // One welded vertex per crossed lattice edge, interpolated from the
          // lower node index so its position does not depend on the caller.
          auto vertex_on = [&](int ca, int cb) {
            if (ids[ca] > ids[cb]) std::swap(ca, cb);
            const std::uint64_t key = ids[ca] * n_nodes + ids[cb];
            auto [it, inserted] =
                edge_vertex.try_emplace(key, static_cast<int>(mesh.vertices.size()));
            if (inserted) {
              const double va = values[ids[ca]], vb = values[ids[cb]];
              const double t = va / (va - vb);
              mesh.vertices.push_back(pos[ca] + t * (pos[cb] - pos[ca]));
            }
            return it->second;
          };
          Vec3 toward_outside = Vec3::Zero();
          for (int q = 0; q < n_out; ++q) toward_outside += pos[outside[q]] / n_out;
          for (int q = 0; q < n_in; ++q) toward_outside -= pos[inside[q]] / n_in;
          // Orientation is decided on the edge-midpoint triangle, which is
          // never degenerate, then applied to the interpolated one.
          auto emit = [&](std::array<std::pair<int, int>, 3> e) {
            const Vec3 m0 = 0.5 * (pos[e[0].first] + pos[e[0].second]);
            const Vec3 m1 = 0.5 * (pos[e[1].first] + pos[e[1].second]);
            const Vec3 m2 = 0.5 * (pos[e[2].first] + pos[e[2].second]);
            if ((m1 - m0).cross(m2 - m0).dot(toward_outside) < 0) std::swap(e[1], e[2]);
            mesh.triangles.push_back({vertex_on(e[0].first, e[0].second),
                                      vertex_on(e[1].first, e[1].second),
                                      vertex_on(e[2].first, e[2].second)});
          };
          if (n_in == 1 || n_out == 1) {
            const int lone = n_in == 1 ? inside[0] : outside[0];
            const int* rest = n_in == 1 ? outside : inside;
            emit({{{lone, rest[0]}, {lone, rest[1]}, {lone, rest[2]}}});
          } else {
            const int a = inside[0], b = inside[1], c = outside[0], d = outside[1];
            emit({{{a, c}, {a, d}, {b, d}}});
            emit({{{a, c}, {b, d}, {b, c}}});
          }
        }
      }
    }
  }
  if (mesh.triangles.empty()) throw EmptySurface("latent field has no zero crossing");
  return mesh;
}

void write_lsc(std::ostream& out, const LatentShapeCode& code) {
  if (code.data.size() != static_cast<std::size_t>(code.m) * code.width) {
    throw InvalidArgument("latent data size does not match its shape");
  }
  out.write("LSC1", 4);
  put_u32(out, static_cast<std::uint32_t>(code.m));
  put_u32(out, static_cast<std::uint32_t>(code.width));
  put_u32(out, 0);
  for (float v : code.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
  if (!out) throw IoError("failed writing LSC1 stream");
}

LatentShapeCode read_lsc(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "LSC1", 4) != 0) {
    throw IoError("not an LSC1 stream");
  }
  const std::uint32_t m = get_u32(in);
  const std::uint32_t width = get_u32(in);
  get_u32(in);
  if (m == 0 || width == 0 || static_cast<std::uint64_t>(m) * width > (1u << 28)) {
    throw IoError("implausible LSC1 shape");
  }
  LatentShapeCode code = LatentShapeCode::zeros(static_cast<int>(m), static_cast<int>(width));
  for (float& v : code.data) v = std::bit_cast<float>(get_u32(in));
  return code;
}

void write_lsc(const std::filesystem::path& path, const LatentShapeCode& code) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_lsc(out, code);
}

LatentShapeCode read_lsc(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return read_lsc(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace urdfgen
