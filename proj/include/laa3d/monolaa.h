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

// Depth target transforms used by the monocular detector: focal-length
// unification (FLU) and the class-specific depth (CSD) bin/residual codec.

#ifndef LAA3D_MONOLAA_H_
#define LAA3D_MONOLAA_H_

#include <array>

#include "laa3d/data_model.h"

namespace laa3d {

struct FluConfig {
  // 640 px corresponds to a 1280x720 image with a 90 degree field of view.
  double canonical_focal = 640.0;
};

// z' = canonical_focal * z / focal. Throws kNonPositiveDepth.
double FluToCanonical(double z, double focal, const FluConfig& cfg = {});
// z = focal * z' / canonical_focal. Throws kNonPositiveDepth.
double FluFromCanonical(double z_canonical, double focal,
                        const FluConfig& cfg = {});

struct CsdConfig {
  std::array<double, 3> range{100.0, 150.0, 300.0};  // meters, per class
  int bin_count = 100;

  double Range(ObjectClass c) const { return range[static_cast<size_t>(c)]; }
  double BinWidth(ObjectClass c) const { return Range(c) / bin_count; }
};

CsdConfig CsdConfigFrom(const ClassConfig& config, int bin_count = 100);

struct DepthBin {
  int bin = 0;
  double residual = 0.0;  // fraction of a bin, in [0, 1)
};

// Uniform bins over [0, range). Throws kDepthOutOfRange.
DepthBin CsdEncode(double z, ObjectClass cls, const CsdConfig& cfg = {});
// Throws kBinOutOfRange for bin outside [0, bin_count) or residual outside
// [0, 1).
double CsdDecode(const DepthBin& code, ObjectClass cls,
                 const CsdConfig& cfg = {});

}  // namespace laa3d

#endif  // LAA3D_MONOLAA_H_
