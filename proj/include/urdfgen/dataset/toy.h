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


#ifndef URDFGEN_DATASET_TOY_H_
#define URDFGEN_DATASET_TOY_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "urdfgen/dataset/record.h"

namespace urdfgen {

// hinged_box: cabinet body and a door on its -y face, hinged on the right
// vertical edge (axis +z, limits [0, pi/2]).
// drawer_box: body and a drawer front sliding out of the +y or +x face
// (limits [0, 0.9 * body depth along the axis]).
// laptop: base slab and a lid hinged on the back edge (axis -x, limits [0, 2]).
enum class ToyFamily { kHingedBox, kDrawerBox, kLaptop };

std::string_view toy_family_name(ToyFamily family);
ToyFamily parse_toy_family(std::string_view name);  // InvalidArgument if unknown

struct ToySample {
  DatasetRecord record;
  ArticulatedObject object;  // normalized, canonical order
};

// Objects are built from closed boxes, normalized to [-1, 1]^3 and put in
// canonical order. Ids are "<family>_<seed>_<index>".
std::vector<ToySample> generate_toy_dataset(int n, ToyFamily family, std::uint64_t seed);

}  // namespace urdfgen

#endif  // URDFGEN_DATASET_TOY_H_
