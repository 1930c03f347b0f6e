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


#ifndef URDFGEN_DATASET_CONDITION_H_
#define URDFGEN_DATASET_CONDITION_H_

#include <filesystem>
#include <optional>

#include "urdfgen/codec/codec.h"

namespace urdfgen {

// Conditioning for one generation step: the whole-object shape tokens, image
// feature tokens when available, and the re-encoded context of the parts
// generated so far.
struct ConditionSet {
  LatentShapeCode whole_tokens;
  std::optional<LatentShapeCode> image_tokens;
  std::optional<LatentShapeCode> context_tokens;
};

// Image features are precomputed elsewhere and stored as an LSC1 token matrix
// next to the record (one row per feature token). Returns nullopt when the
// sidecar does not exist.
std::optional<LatentShapeCode> load_image_features(const std::filesystem::path& sidecar);

}  // namespace urdfgen

#endif  // URDFGEN_DATASET_CONDITION_H_
