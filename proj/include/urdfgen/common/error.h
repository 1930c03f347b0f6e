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

#ifndef URDFGEN_COMMON_ERROR_H_
#define URDFGEN_COMMON_ERROR_H_

#include <stdexcept>
#include <string>

namespace urdfgen {

// Root of every error the library throws. Each subclass corresponds to one
// failure kind callers are expected to distinguish.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define URDFGEN_DEFINE_ERROR(Name)        \
  class Name : public Error {             \
   public:                                \
    using Error::Error;                   \
  }

URDFGEN_DEFINE_ERROR(InvalidArgument);
URDFGEN_DEFINE_ERROR(InvalidMesh);
URDFGEN_DEFINE_ERROR(ThickeningFailed);
URDFGEN_DEFINE_ERROR(EmptySurface);
URDFGEN_DEFINE_ERROR(IoError);
URDFGEN_DEFINE_ERROR(InvalidKinematicTree);
URDFGEN_DEFINE_ERROR(MeshResolutionError);
URDFGEN_DEFINE_ERROR(InvalidLimits);
URDFGEN_DEFINE_ERROR(LimitViolation);
URDFGEN_DEFINE_ERROR(UrdfParseError);
URDFGEN_DEFINE_ERROR(SchemaError);
URDFGEN_DEFINE_ERROR(GenerationFailed);
URDFGEN_DEFINE_ERROR(DegenerateConfiguration);
URDFGEN_DEFINE_ERROR(AlignmentRejected);

#undef URDFGEN_DEFINE_ERROR

// Thrown when a training loss becomes non-finite. Carries the path of the
// last checkpoint written before divergence (empty if none was written).
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(const std::string& what, std::string last_checkpoint)
      : Error(what), last_checkpoint_(std::move(last_checkpoint)) {}
  const std::string& last_checkpoint() const { return last_checkpoint_; }

 private:
  std::string last_checkpoint_;
};

}  // namespace urdfgen

#endif  // URDFGEN_COMMON_ERROR_H_
