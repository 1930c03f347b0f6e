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


#ifndef URDFGEN_TESTS_TEST_OBJECTS_H_
#define URDFGEN_TESTS_TEST_OBJECTS_H_

#include <string>

#include "test_util.h"
#include "urdfgen/geometry/mesh.h"
#include "urdfgen/urdf/model.h"

namespace urdfgen::testing {

struct ObjectOptions {
  int min_links = 1;
  int max_links = 5;
  bool flat = false;           // every joint attaches to the root
  bool revolute_only = false;
};

// Valid random articulated object: box meshes, unit axes, ordered limits.
inline ArticulatedObject random_object(Gen& gen, const ObjectOptions& opt = {}) {
  ArticulatedObject obj;
  const int n = gen.integer(opt.min_links, opt.max_links);
  for (int i = 0; i < n; ++i) {
    Link link;
    link.name = "link_" + std::to_string(i + 1);
    const Vec3 lo = gen.vec(-1, 0.5);
    link.mesh = make_box(lo, lo + gen.vec(0.05, 0.5));
    if (i > 0) {
      JointSpec j;
      j.parent = opt.flat ? 0 : gen.integer(0, i - 1);
      j.origin = gen.vec(-0.5, 0.5);
      j.axis = gen.unit();
      j.type = opt.revolute_only ? JointType::kRevolute
                                 : static_cast<JointType>(gen.integer(0, kJointTypeCount - 1));
      if (has_limits(j.type)) {
        j.lower = gen.uniform(-2, 0.5);
        j.upper = j.lower + gen.uniform(0, 2);
      }
      link.joint = j;
    }
    obj.links.push_back(std::move(link));
  }
  return obj;
}

// Joint values spread over each joint's range: fraction in [0, 1].
inline std::vector<double> joint_values(const ArticulatedObject& obj, double fraction) {
  std::vector<double> q(obj.size(), 0.0);
  for (int i = 0; i < obj.size(); ++i) {
    const auto& j = obj.links[i].joint;
    if (!j) continue;
    if (has_limits(j->type)) {
      q[i] = fraction >= 1.0 ? j->upper : j->lower + fraction * (j->upper - j->lower);
    } else if (j->type == JointType::kContinuous) {
      q[i] = 6.0 * fraction - 3.0;
    }
  }
  return q;
}

}  // namespace urdfgen::testing

#endif  // URDFGEN_TESTS_TEST_OBJECTS_H_
