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

// Distance-associated multi-object tracking metrics: CLEAR MOT, identity
// (IDF1) and HOTA. Every metric is computed for one class at a time.

#ifndef LAA3D_MOT_METRICS_H_
#define LAA3D_MOT_METRICS_H_

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "laa3d/data_model.h"

namespace laa3d {

enum class EvalFrame { kCamera, kWorld };

struct MotObject {
  int64_t id = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

struct MotFrame {
  int64_t frame_index = 0;
  std::vector<MotObject> gt;
  std::vector<MotObject> pred;
};

// Extracts one class from ground truth and tracks. In world mode positions
// are mapped through each frame's extrinsic. Throws kFrameRangeMismatch if
// tracks reference frames the sequence does not have.
std::vector<MotFrame> BuildMotFrames(const Sequence& seq, const TrackSet& tracks,
                                     ObjectClass cls, EvalFrame frame);

// gt id -> pred id correspondences carried from the previous frame.
using Correspondences = std::map<int64_t, int64_t>;

// Indices (gt, pred) into the frame's lists. Carried pairs still within the
// threshold are kept; the rest is an optimal gated assignment.
std::vector<std::pair<size_t, size_t>> FrameAssociate(
    const MotFrame& frame, double threshold, const Correspondences& carry);

struct ClearResult {
  int64_t num_gt = 0;
  int64_t matches = 0;
  int64_t fn = 0;
  int64_t fp = 0;
  int64_t idsw = 0;
  int64_t frag = 0;
  double distance_sum = 0.0;

  double mota() const;  // percent, may be negative
  double moda() const;  // percent
  double motp() const;  // meters; 0 without matches
};

// Throws kEmptyGroundTruth if there is no ground truth at all.
ClearResult ClearMot(std::span<const MotFrame> frames, double threshold);

struct IdentityResult {
  int64_t idtp = 0;
  int64_t idfp = 0;
  int64_t idfn = 0;

  double idf1() const;  // percent
};

IdentityResult IdentityMetrics(std::span<const MotFrame> frames,
                               double threshold);

inline constexpr int kHotaAlphaCount = 19;

// Localization alpha values 0.05, 0.10, ..., 0.95.
std::array<double, kHotaAlphaCount> HotaAlphas();

struct HotaResult {
  std::array<int64_t, kHotaAlphaCount> tp{};
  std::array<int64_t, kHotaAlphaCount> fn{};
  std::array<int64_t, kHotaAlphaCount> fp{};
  // Sum over true positives of their association score, per alpha.
  std::array<double, kHotaAlphaCount> ass_sum{};

  double DetA(int a) const;  // fraction
  double AssA(int a) const;  // fraction
  double HotaAt(int a) const { return std::sqrt(DetA(a) * AssA(a)); }
  double hota() const;   // percent
  double det_a() const;  // percent
  double ass_a() const;  // percent
};

// Similarity max(0, 1 - d / threshold); per-alpha matching maximizes summed
// similarity over pairs with similarity >= alpha.
HotaResult Hota(std::span<const MotFrame> frames, double threshold);

struct MotClassResult {
  ClearResult clear;
  IdentityResult identity;
  HotaResult hota;
};

// Throws kEmptyGroundTruth if the class has no ground truth.
MotClassResult EvaluateMotClass(std::span<const MotFrame> frames,
                                double threshold);

// Pools counts across sequences (associative and commutative).
MotClassResult CombineMot(std::span<const MotClassResult> parts);

}  // namespace laa3d

#endif  // LAA3D_MOT_METRICS_H_
