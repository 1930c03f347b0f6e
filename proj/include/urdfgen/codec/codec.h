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


#ifndef URDFGEN_CODEC_CODEC_H_
#define URDFGEN_CODEC_CODEC_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "urdfgen/geometry/types.h"

namespace urdfgen {

// Token count and surface sample count of the full-scale pipeline.
inline constexpr int kFullScaleTokens = 512;
inline constexpr int kFullScaleSamplePoints = 204800;

// Number of meaningful leading feature channels in each token: anchor
// position (3), neighborhood normal (3), neighborhood radius (1), covariance
// eigenvalues (3). Channels past this are zero padding.
inline constexpr int kTokenFeatures = 10;

struct CodecConfig {
  int m_tokens = 32;
  int feature_width = 12;
  int n_sample_points = 4096;

  // Throws InvalidArgument when m_tokens < 4, n_sample_points < m_tokens or
  // feature_width < kTokenFeatures.
  void validate() const;
  int neighborhood() const { return n_sample_points / m_tokens; }
};

// M tokens of width Dw, row-major, stored in single precision.
struct LatentShapeCode {
  int m = 0;
  int width = 0;
  std::vector<float> data;

  static LatentShapeCode zeros(int m, int width);

  float& at(int token, int channel) { return data[static_cast<std::size_t>(token) * width + channel]; }
  float at(int token, int channel) const {
    return data[static_cast<std::size_t>(token) * width + channel];
  }
  Vec3 anchor(int token) const { return Vec3(at(token, 0), at(token, 1), at(token, 2)); }
  Vec3 normal(int token) const { return Vec3(at(token, 3), at(token, 4), at(token, 5)); }
  bool all_finite() const;
  double rms() const;

  bool operator==(const LatentShapeCode&) const = default;
};

// Greedy max-min subsampling. The seeded overload draws the start index from
// the seed; ties in the max-min distance go to the lowest index.
std::vector<int> farthest_point_sample(std::span<const Vec3> points, int m, int start);
std::vector<int> farthest_point_sample(const OrientedPointCloud& cloud, int m, std::uint64_t seed);

// Deterministic geometric featurizer. The cloud is sorted lexicographically
// (position, then normal) before anything else, so the code depends only on
// the set of oriented points.
LatentShapeCode encode(const OrientedPointCloud& cloud, const CodecConfig& cfg);

// Signed distance implied by the oriented anchors: point-to-plane distances to
// the 8 nearest anchors, blended with inverse-square-distance weights that
// fall to zero at the 9th nearest anchor (keeping the field continuous) and
// are tilted toward the largest plane distance (a soft local maximum, exact on
// convex patches). Tokens with a zero normal carry no surface; with none left
// the field is +infinity everywhere.
class SdfDecoder {
 public:
  explicit SdfDecoder(const LatentShapeCode& code);
  double operator()(const Vec3& query) const;
  bool empty() const { return anchors_.empty(); }

 private:
  std::vector<Vec3> anchors_;
  std::vector<Vec3> normals_;
};

double decode_sdf(const LatentShapeCode& code, const Vec3& query);

// Zero level set of decode_sdf on a resolution^3 node lattice spanning
// [-1.1, 1.1]^3. Each lattice cube is split into six tetrahedra sharing its
// main diagonal, which makes the output closed and consistently oriented;
// lattice boundary nodes are treated as outside. Throws EmptySurface when no
// sign change exists and InvalidArgument when resolution < 16.
TriangleMesh extract_mesh(const LatentShapeCode& code, int resolution);

inline constexpr double kExtractionHalfExtent = 1.1;

// "LSC1" binary form: 4-byte magic, uint32 M, uint32 Dw, uint32 reserved,
// then M*Dw little-endian float32 values.
void write_lsc(std::ostream& out, const LatentShapeCode& code);
LatentShapeCode read_lsc(std::istream& in);
void write_lsc(const std::filesystem::path& path, const LatentShapeCode& code);
LatentShapeCode read_lsc(const std::filesystem::path& path);

}  // namespace urdfgen

#endif  // URDFGEN_CODEC_CODEC_H_
