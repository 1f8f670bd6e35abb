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

#include "laa3d/monolaa.h"

#include <cmath>
#include <string>

#include "laa3d/error.h"

namespace laa3d {
namespace {

void RequirePositive(double z, double focal, const FluConfig& cfg) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::kNonPositiveDepth,
                "depth must be positive, got " + std::to_string(z));
  }
  if (!(focal > 0.0) || !(cfg.canonical_focal > 0.0)) {
    throw Error(ErrorCode::kNonPositiveDepth, "focal lengths must be positive");
  }
}

}  // namespace

double FluToCanonical(double z, double focal, const FluConfig& cfg) {
  RequirePositive(z, focal, cfg);
  return cfg.canonical_focal * z / focal;
}

double FluFromCanonical(double z_canonical, double focal, const FluConfig& cfg) {
  RequirePositive(z_canonical, focal, cfg);
  return focal * z_canonical / cfg.canonical_focal;
}

CsdConfig CsdConfigFrom(const ClassConfig& config, int bin_count) {
  CsdConfig cfg;
  for (ObjectClass c : kAllClasses) {
    cfg.range[static_cast<size_t>(c)] = config[c].depth_range;
  }
  cfg.bin_count = bin_count;
  return cfg;
}

DepthBin CsdEncode(double z, ObjectClass cls, const CsdConfig& cfg) {
  const double range = cfg.Range(cls);
  if (!(z >= 0.0) || !(z < range)) {
    throw Error(ErrorCode::kDepthOutOfRange,
                "depth " + std::to_string(z) + " outside [0, " +
                    std::to_string(range) + ") for " + std::string(ClassName(cls)));
  }
  const double scaled = z / cfg.BinWidth(cls);
  DepthBin out;
  out.bin = static_cast<int>(std::floor(scaled));
  // Guard the top edge against rounding in the division.
  if (out.bin >= cfg.bin_count) out.bin = cfg.bin_count - 1;
  out.residual = scaled - out.bin;
  if (out.residual >= 1.0) out.residual = std::nextafter(1.0, 0.0);
  return out;
}

double CsdDecode(const DepthBin& code, ObjectClass cls, const CsdConfig& cfg) {
  if (code.bin < 0 || code.bin >= cfg.bin_count) {
    throw Error(ErrorCode::kBinOutOfRange,
                "bin " + std::to_string(code.bin) + " outside [0, " +
                    std::to_string(cfg.bin_count) + ")");
  }
  if (!(code.residual >= 0.0) || !(code.residual < 1.0)) {
    throw Error(ErrorCode::kBinOutOfRange, "residual outside [0, 1)");
  }
  return (code.bin + code.residual) * cfg.BinWidth(cls);
}

}  // namespace laa3d
