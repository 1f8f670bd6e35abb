/* Copyright 2026 The laa3d-eval Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LAA3D_ERROR_H_
#define LAA3D_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace laa3d {

enum class ErrorCode {
  // Input errors (CLI exit code 2).
  kParse,
  kSchema,
  kInvariant,
  kScoreRange,
  kIo,
  kDegenerateSpec,
  // Evaluation precondition errors (CLI exit code 3).
  kEmptyGroundTruth,
  kFrameRangeMismatch,
  kNoTruePositives,
  // Numerical / geometric failures.
  kBehindCamera,
  kFullyOutside,
  kNonUnitEncoding,
  kInfeasible,
  kSingularInnovation,
  kInsufficientHistory,
  kLengthMismatch,
  kNonPositiveDepth,
  kDepthOutOfRange,
  kBinOutOfRange,
};

std::string_view ErrorCodeName(ErrorCode code);

// Single exception type for the toolkit; callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// True for errors caused by malformed or unreadable user input.
bool IsInputError(ErrorCode code);
// True for errors where input parsed fine but the metric is undefined.
bool IsPreconditionError(ErrorCode code);

}  // namespace laa3d

#endif  // LAA3D_ERROR_H_
