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

#include "laa3d/error.h"

namespace laa3d {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kInvariant: return "InvariantError";
    case ErrorCode::kScoreRange: return "ScoreRangeError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kDegenerateSpec: return "DegenerateSpec";
    case ErrorCode::kEmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::kFrameRangeMismatch: return "FrameRangeMismatch";
    case ErrorCode::kNoTruePositives: return "NoTruePositives";
    case ErrorCode::kBehindCamera: return "BehindCamera";
    case ErrorCode::kFullyOutside: return "FullyOutside";
    case ErrorCode::kNonUnitEncoding: return "NonUnitEncoding";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kSingularInnovation: return "SingularInnovation";
    case ErrorCode::kInsufficientHistory: return "InsufficientHistory";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kNonPositiveDepth: return "NonPositiveDepth";
    case ErrorCode::kDepthOutOfRange: return "DepthOutOfRange";
    case ErrorCode::kBinOutOfRange: return "BinOutOfRange";
  }
  return "UnknownError";
}

bool IsInputError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kSchema:
    case ErrorCode::kInvariant:
    case ErrorCode::kScoreRange:
    case ErrorCode::kIo:
    case ErrorCode::kDegenerateSpec:
      return true;
    default:
      return false;
  }
}

bool IsPreconditionError(ErrorCode code) {
  return code == ErrorCode::kEmptyGroundTruth ||
         code == ErrorCode::kFrameRangeMismatch ||
         code == ErrorCode::kNoTruePositives;
}

}  // namespace laa3d
