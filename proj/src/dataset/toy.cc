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


#include "urdfgen/dataset/toy.h"

#include <cstdio>
#include <numbers>
#include <random>
#include <string>

#include "urdfgen/common/error.h"
#include "urdfgen/geometry/mesh.h"

namespace urdfgen {
namespace {

class Dice {
 public:
  explicit Dice(std::uint64_t seed) : engine_(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  bool coin() { return std::bernoulli_distribution(0.5)(engine_); }

 private:
  std::mt19937_64 engine_;
};

// Point on the line {p + s * axis} closest to c.
Vec3 foot_of_perpendicular(const Vec3& c, const Vec3& p, const Vec3& axis) {
  return p + (c - p).dot(axis) * axis;
}

ArticulatedObject two_part(TriangleMesh body, const std::string& part_name, TriangleMesh part,
                           const Vec3& axis_point, const Vec3& axis, JointType type, double lower,
                           double upper) {
  Aabb box = bounds(body);
  box.extend(bounds(part));
  JointSpec j;
  j.origin = foot_of_perpendicular(box.center(), axis_point, axis);
  j.axis = axis;
  j.type = type;
  j.lower = lower;
  j.upper = upper;
  j.parent = 0;
  ArticulatedObject obj;
  obj.links.push_back({"base", std::move(body), std::nullopt});
  obj.links.push_back({part_name, std::move(part), j});
  return obj;
}

ArticulatedObject hinged_box(Dice& dice) {
  const double w = dice(0.6, 1.2), d = dice(0.4, 0.8), h = dice(0.6, 1.4);
  const double t = dice(0.06, 0.09) * std::max({w, d, h});
  const double gap = 0.01;
  TriangleMesh body = make_box({-w / 2, -d / 2, 0}, {w / 2, d / 2, h});
  const double y1 = -d / 2 - gap, y0 = y1 - t;
  TriangleMesh door = make_box({-w / 2, y0, 0}, {w / 2, y1, h});
  // Opening rotates the free (left) edge toward -y, away from the body.
  return two_part(std::move(body), "door", std::move(door), {w / 2, 0.5 * (y0 + y1), 0}, Vec3::UnitZ(),
                  JointType::kRevolute, 0.0, std::numbers::pi / 2);
}

ArticulatedObject drawer_box(Dice& dice) {
  const double w = dice(0.6, 1.2), d = dice(0.5, 1.0), h = dice(0.5, 1.2);
  const double t = dice(0.06, 0.09) * std::max({w, d, h});
  const double gap = 0.01;
  const double margin = dice(0.08, 0.15);
  const double z0 = h * dice(0.1, 0.3), z1 = h * dice(0.6, 0.9);
  TriangleMesh body = make_box({-w / 2, -d / 2, 0}, {w / 2, d / 2, h});
  if (dice.coin()) {
    const Vec3 lo(-w / 2 + margin * w, d / 2 + gap, z0);
    const Vec3 hi(w / 2 - margin * w, d / 2 + gap + t, z1);
    return two_part(std::move(body), "drawer", make_box(lo, hi), 0.5 * (lo + hi), Vec3::UnitY(),
                    JointType::kPrismatic, 0.0, 0.9 * d);
  }
  const Vec3 lo(w / 2 + gap, -d / 2 + margin * d, z0);
  const Vec3 hi(w / 2 + gap + t, d / 2 - margin * d, z1);
  return two_part(std::move(body), "drawer", make_box(lo, hi), 0.5 * (lo + hi), Vec3::UnitX(),
                  JointType::kPrismatic, 0.0, 0.9 * w);
}

ArticulatedObject laptop(Dice& dice) {
  const double w = dice(0.8, 1.2), d = dice(0.6, 0.9);
  const double tb = dice(0.05, 0.08), tl = dice(0.04, 0.06), gap = 0.01;
  TriangleMesh base = make_box({-w / 2, -d / 2, 0}, {w / 2, d / 2, tb});
  const double z0 = tb + gap, z1 = z0 + tl;
  TriangleMesh lid = make_box({-w / 2, -d / 2, z0}, {w / 2, d / 2, z1});
  // Rotating about -x lifts the front edge of the lid.
  return two_part(std::move(base), "lid", std::move(lid), {0, d / 2, 0.5 * (z0 + z1)}, -Vec3::UnitX(),
                  JointType::kRevolute, 0.0, 2.0);
}

}  // namespace

std::string_view toy_family_name(ToyFamily family) {
  switch (family) {
    case ToyFamily::kHingedBox: return "hinged_box";
    case ToyFamily::kDrawerBox: return "drawer_box";
    case ToyFamily::kLaptop: return "laptop";
  }
  return "unknown";
}

ToyFamily parse_toy_family(std::string_view name) {
  for (ToyFamily f : {ToyFamily::kHingedBox, ToyFamily::kDrawerBox, ToyFamily::kLaptop}) {
    if (toy_family_name(f) == name) return f;
  }
  throw InvalidArgument("unknown toy family \"" + std::string(name) + "\"");
}

std::vector<ToySample> generate_toy_dataset(int n, ToyFamily family, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("generate_toy_dataset: n must be at least 1");
  std::vector<ToySample> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    // One stream per instance so a sample does not depend on n.
    Dice dice(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(i) + 1);
    ArticulatedObject obj;
    switch (family) {
      case ToyFamily::kHingedBox: obj = hinged_box(dice); break;
      case ToyFamily::kDrawerBox: obj = drawer_box(dice); break;
      case ToyFamily::kLaptop: obj = laptop(dice); break;
    }
    obj = canonical_link_order(normalize_object(obj));
    char id[96];
    std::snprintf(id, sizeof id, "%s_%llu_%04d", std::string(toy_family_name(family)).c_str(),
                  static_cast<unsigned long long>(seed), i);
    out.push_back({make_record(id, obj), std::move(obj)});
  }
  return out;
}

}  // namespace urdfgen
