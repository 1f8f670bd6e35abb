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

#include <optional>
#include <random>

#include <gtest/gtest.h>

#include "laa3d/error.h"

namespace laa3d {
namespace {

template <typename F>
std::optional<ErrorCode> CodeOf(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

TEST(FluTest, Examples) {
  EXPECT_EQ(FluToCanonical(50, 640), 50.0);
  EXPECT_DOUBLE_EQ(FluToCanonical(90, 1920), 30.0);
  EXPECT_DOUBLE_EQ(FluFromCanonical(30, 1920), 90.0);
  FluConfig custom;
  custom.canonical_focal = 1000;
  EXPECT_DOUBLE_EQ(FluToCanonical(10, 500, custom), 20.0);
}

TEST(FluTest, Errors) {
  EXPECT_EQ(CodeOf([] { FluToCanonical(0, 640); }), ErrorCode::kNonPositiveDepth);
  EXPECT_EQ(CodeOf([] { FluToCanonical(-1, 640); }), ErrorCode::kNonPositiveDepth);
  EXPECT_EQ(CodeOf([] { FluFromCanonical(0, 640); }), ErrorCode::kNonPositiveDepth);
  EXPECT_THROW(FluToCanonical(10, 0), Error);
}

TEST(FluTest, RoundtripAndScaling) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> z(0.01, 500), f(100, 5000);
  for (int i = 0; i < 100000; ++i) {
    const double zi = z(rng), fi = f(rng);
    const double zc = FluToCanonical(zi, fi);
    EXPECT_NEAR(FluFromCanonical(zc, fi), zi, 1e-12 * std::max(1.0, zi));
    EXPECT_NEAR(FluToCanonical(2 * zi, fi), 2 * zc, 1e-12 * zc);
    EXPECT_NEAR(FluToCanonical(zi, 2 * fi), zc / 2, 1e-12 * zc);
  }
}

TEST(CsdTest, Examples) {
  const DepthBin mav = CsdEncode(42.37, ObjectClass::kMav);
  EXPECT_EQ(mav.bin, 42);
  EXPECT_NEAR(mav.residual, 0.37, 1e-12);
  const DepthBin zero = CsdEncode(0.0, ObjectClass::kEvtol);
  EXPECT_EQ(zero.bin, 0);
  EXPECT_EQ(zero.residual, 0.0);
  const DepthBin heli = CsdEncode(299.999, ObjectClass::kHelicopter);
  EXPECT_EQ(heli.bin, 99);
  EXPECT_NEAR(heli.residual, 0.999 / 3.0 + 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(heli.residual, 0.9997, 1e-4);

  EXPECT_NEAR(CsdDecode(mav, ObjectClass::kMav), 42.37, 1e-12);
  EXPECT_EQ(CsdDecode(zero, ObjectClass::kEvtol), 0.0);
  EXPECT_NEAR(CsdDecode(heli, ObjectClass::kHelicopter), 299.999, 1e-12);
}

TEST(CsdTest, BinWidths) {
  const CsdConfig cfg;
  EXPECT_EQ(cfg.BinWidth(ObjectClass::kMav), 1.0);
  EXPECT_EQ(cfg.BinWidth(ObjectClass::kEvtol), 1.5);
  EXPECT_EQ(cfg.BinWidth(ObjectClass::kHelicopter), 3.0);
  const CsdConfig from = CsdConfigFrom(DefaultClassConfig(), 50);
  EXPECT_EQ(from.bin_count, 50);
  EXPECT_EQ(from.BinWidth(ObjectClass::kHelicopter), 6.0);
}

TEST(CsdTest, Errors) {
  EXPECT_EQ(CodeOf([] { CsdEncode(100.0, ObjectClass::kMav); }), ErrorCode::kDepthOutOfRange);
  EXPECT_EQ(CodeOf([] { CsdEncode(-0.1, ObjectClass::kMav); }), ErrorCode::kDepthOutOfRange);
  EXPECT_EQ(CodeOf([] { CsdDecode({100, 0.0}, ObjectClass::kMav); }), ErrorCode::kBinOutOfRange);
  EXPECT_EQ(CodeOf([] { CsdDecode({-1, 0.0}, ObjectClass::kMav); }), ErrorCode::kBinOutOfRange);
  EXPECT_EQ(CodeOf([] { CsdDecode({3, 1.0}, ObjectClass::kMav); }), ErrorCode::kBinOutOfRange);
}

TEST(CsdTest, RoundtripAndMonotone) {
  std::mt19937_64 rng(52);
  const CsdConfig cfg;
  for (ObjectClass c : kAllClasses) {
    std::uniform_real_distribution<double> z(0, cfg.Range(c));
    for (int i = 0; i < 100000; ++i) {
      const double a = z(rng), b = z(rng);
      const DepthBin ea = CsdEncode(a, c), eb = CsdEncode(b, c);
      EXPECT_NEAR(CsdDecode(ea, c), a, 1e-12);
      EXPECT_GE(ea.residual, 0.0);
      EXPECT_LT(ea.residual, 1.0);
      if (a < b) {
        EXPECT_TRUE(ea.bin < eb.bin || (ea.bin == eb.bin && ea.residual <= eb.residual));
      }
    }
  }
}

}  // namespace
}  // namespace laa3d
