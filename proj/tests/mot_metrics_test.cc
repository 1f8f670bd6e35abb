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

#include "laa3d/mot_metrics.h"

#include <algorithm>
#include <functional>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "laa3d/error.h"

namespace laa3d {
namespace {

constexpr double kGate = 4.0;

MotObject Obj(int64_t id, double x, double y = 0.0, double z = 30.0) {
  return MotObject{id, Eigen::Vector3d(x, y, z)};
}

// One gt track at the origin for n frames, predicted exactly by pred_ids[f]
// (negative id means no prediction in that frame).
std::vector<MotFrame> SingleTrack(const std::vector<int64_t>& pred_ids) {
  std::vector<MotFrame> frames(pred_ids.size());
  for (size_t f = 0; f < frames.size(); ++f) {
    frames[f].frame_index = int64_t(f);
    frames[f].gt = {Obj(1, 0)};
    if (pred_ids[f] >= 0) frames[f].pred = {Obj(pred_ids[f], 0.1)};
  }
  return frames;
}

TEST(ClearMotTest, PerfectTracking) {
  std::vector<MotFrame> frames(10);
  for (int f = 0; f < 10; ++f) {
    frames[f].frame_index = f;
    frames[f].gt = {Obj(1, 0), Obj(2, 10)};
    frames[f].pred = {Obj(7, 0), Obj(8, 10)};
  }
  const ClearResult r = ClearMot(frames, kGate);
  EXPECT_EQ(r.mota(), 100.0);
  EXPECT_EQ(r.moda(), 100.0);
  EXPECT_EQ(r.motp(), 0.0);
  EXPECT_EQ(r.idsw, 0);
  EXPECT_EQ(r.matches, 20);
}

TEST(ClearMotTest, MissedFramesAndFalsePositive) {
  std::vector<MotFrame> frames = SingleTrack({5, 5, 5, -1, -1, 5, 5, 5, 5, 5});
  frames[7].pred.push_back(Obj(9, 20));
  const ClearResult r = ClearMot(frames, kGate);
  EXPECT_EQ(r.fn, 2);
  EXPECT_EQ(r.fp, 1);
  EXPECT_EQ(r.idsw, 0);
  EXPECT_EQ(r.frag, 1);
  EXPECT_DOUBLE_EQ(r.mota(), 70.0);
  EXPECT_DOUBLE_EQ(r.moda(), 70.0);
  EXPECT_NEAR(r.motp(), 0.1, 1e-12);
}

TEST(ClearMotTest, NegativeMota) {
  std::vector<MotFrame> frames = SingleTrack({-1, -1, -1, -1});
  for (auto& f : frames) f.pred = {Obj(3, 50), Obj(4, -50)};
  const ClearResult r = ClearMot(frames, kGate);
  EXPECT_EQ(r.fn, 4);
  EXPECT_EQ(r.fp, 8);
  EXPECT_DOUBLE_EQ(r.mota(), -200.0);
}

TEST(ClearMotTest, GateIsClassThreshold) {
  // 13 m from a helicopter with a 12 m gate is a miss plus a false positive.
  std::vector<MotFrame> frames(1);
  frames[0].gt = {Obj(1, 0)};
  frames[0].pred = {Obj(1, 13)};
  const ClearResult r = ClearMot(frames, 12.0);
  EXPECT_EQ(r.matches, 0);
  EXPECT_EQ(r.fn, 1);
  EXPECT_EQ(r.fp, 1);
  EXPECT_EQ(ClearMot(frames, 14.0).matches, 1);
}

TEST(ClearMotTest, OptimalAssignmentWithinFrame) {
  // Greedy nearest-first would pair g1-p1 (0.5 m) and leave g2 unmatched.
  std::vector<MotFrame> frames(1);
  frames[0].gt = {Obj(1, 0), Obj(2, 3.4)};
  frames[0].pred = {Obj(1, 0.5), Obj(2, -3.0)};
  const ClearResult r = ClearMot(frames, kGate);
  EXPECT_EQ(r.matches, 2);
}

TEST(ClearMotTest, IdentitySwitchCounted) {
  const ClearResult r = ClearMot(SingleTrack({5, 5, 5, 6, 6}), kGate);
  EXPECT_EQ(r.idsw, 1);
  EXPECT_DOUBLE_EQ(r.mota(), 80.0);
  EXPECT_DOUBLE_EQ(r.moda(), 100.0);
}

TEST(ClearMotTest, CarriedCorrespondencePersists) {
  // A closer newcomer does not steal a gt whose carried match is in the gate.
  std::vector<MotFrame> frames = SingleTrack({5, 5});
  frames[1].pred = {Obj(5, 2.0), Obj(6, 0.0)};
  const ClearResult r = ClearMot(frames, kGate);
  EXPECT_EQ(r.idsw, 0);
  EXPECT_EQ(r.fp, 1);
}

TEST(ClearMotTest, EmptyGroundTruth) {
  std::vector<MotFrame> frames(2);
  frames[0].pred = {Obj(1, 0)};
  try {
    ClearMot(frames, kGate);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGroundTruth);
  }
}

TEST(IdentityTest, PerfectAndEmpty) {
  const IdentityResult perfect = IdentityMetrics(SingleTrack({4, 4, 4}), kGate);
  EXPECT_EQ(perfect.idf1(), 100.0);
  EXPECT_EQ(perfect.idfp, 0);
  EXPECT_EQ(perfect.idfn, 0);
  const IdentityResult none = IdentityMetrics(SingleTrack({-1, -1, -1}), kGate);
  EXPECT_EQ(none.idf1(), 0.0);
  EXPECT_EQ(none.idfn, 3);
}

TEST(IdentityTest, HalfSplit) {
  const IdentityResult r = IdentityMetrics(SingleTrack({3, 3, 3, 3, 3, 4, 4, 4, 4, 4}), kGate);
  EXPECT_EQ(r.idtp, 5);
  EXPECT_EQ(r.idfn, 5);
  EXPECT_EQ(r.idfp, 5);
  EXPECT_DOUBLE_EQ(r.idf1(), 50.0);
}

std::vector<MotFrame> RandomFrames(std::mt19937_64& rng, int n_frames, int n_gt, int n_pred) {
  std::uniform_real_distribution<double> pos(-6, 6);
  std::vector<MotFrame> frames(n_frames);
  for (int f = 0; f < n_frames; ++f) {
    frames[f].frame_index = f;
    for (int g = 0; g < n_gt; ++g) {
      if (rng() % 4 != 0) frames[f].gt.push_back(Obj(g, pos(rng), pos(rng)));
    }
    for (int p = 0; p < n_pred; ++p) {
      if (rng() % 4 != 0) frames[f].pred.push_back(Obj(100 + p, pos(rng), pos(rng)));
    }
  }
  if (frames[0].gt.empty()) frames[0].gt.push_back(Obj(0, 0));
  return frames;
}

// Brute force over every partial injective gt-trajectory -> pred-trajectory map.
int64_t BruteForceIdtp(const std::vector<MotFrame>& frames, int n_gt, int n_pred) {
  std::vector<std::vector<int64_t>> w(n_gt, std::vector<int64_t>(n_pred, 0));
  for (const auto& f : frames) {
    for (const auto& g : f.gt) {
      for (const auto& p : f.pred) {
        if ((g.position - p.position).norm() <= kGate) ++w[g.id][p.id - 100];
      }
    }
  }
  int64_t best = 0;
  std::vector<int> assign(n_gt, -1);
  std::function<void(int, std::set<int>&, int64_t)> rec = [&](int g, std::set<int>& used,
                                                             int64_t acc) {
    if (g == n_gt) {
      best = std::max(best, acc);
      return;
    }
    rec(g + 1, used, acc);
    for (int p = 0; p < n_pred; ++p) {
      if (used.count(p)) continue;
      used.insert(p);
      rec(g + 1, used, acc + w[g][p]);
      used.erase(p);
    }
  };
  std::set<int> used;
  rec(0, used, 0);
  return best;
}

TEST(IdentityTest, MatchesBruteForce) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_gt = 1 + int(rng() % 3), n_pred = 1 + int(rng() % 4);
    const auto frames = RandomFrames(rng, 6, n_gt, n_pred);
    const IdentityResult r = IdentityMetrics(frames, kGate);
    EXPECT_EQ(r.idtp, BruteForceIdtp(frames, n_gt, n_pred));
    int64_t n_gt_dets = 0, n_pred_dets = 0;
    for (const auto& f : frames) {
      n_gt_dets += int64_t(f.gt.size());
      n_pred_dets += int64_t(f.pred.size());
    }
    EXPECT_EQ(r.idtp + r.idfn, n_gt_dets);
    EXPECT_EQ(r.idtp + r.idfp, n_pred_dets);
  }
}

TEST(HotaTest, PerfectAndEmpty) {
  const HotaResult perfect = Hota(SingleTrack({2, 2, 2, 2}), kGate);
  // 0.1 m offset gives similarity 0.975, above every alpha.
  EXPECT_DOUBLE_EQ(perfect.hota(), 100.0);
  EXPECT_DOUBLE_EQ(perfect.det_a(), 100.0);
  EXPECT_DOUBLE_EQ(perfect.ass_a(), 100.0);
  const HotaResult none = Hota(SingleTrack({-1, -1}), kGate);
  EXPECT_EQ(none.hota(), 0.0);
  EXPECT_EQ(none.det_a(), 0.0);
  EXPECT_EQ(none.ass_a(), 0.0);
}

TEST(HotaTest, SplitTrack) {
  // Each true positive: TPA 5, FNA 5, FPA 0, so AssA = 5 / 10.
  const HotaResult r = Hota(SingleTrack({3, 3, 3, 3, 3, 4, 4, 4, 4, 4}), kGate);
  EXPECT_DOUBLE_EQ(r.det_a(), 100.0);
  EXPECT_DOUBLE_EQ(r.ass_a(), 50.0);
  EXPECT_NEAR(r.hota(), 100.0 * std::sqrt(0.5), 1e-9);
}

TEST(HotaTest, AlphaThresholdsApplyToSimilarity) {
  // Offset 2 m with a 4 m gate: similarity 0.5 passes alpha <= 0.5 only.
  std::vector<MotFrame> frames(1);
  frames[0].gt = {Obj(1, 0)};
  frames[0].pred = {Obj(1, 2.0)};
  const HotaResult r = Hota(frames, kGate);
  const auto alphas = HotaAlphas();
  for (int a = 0; a < kHotaAlphaCount; ++a) {
    EXPECT_EQ(r.tp[a], alphas[a] <= 0.5 + 1e-12 ? 1 : 0) << alphas[a];
  }
  EXPECT_NEAR(r.hota(), 100.0 * 10.0 / 19.0, 1e-9);
}

TEST(HotaTest, MeanOfPerAlphaScores) {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const HotaResult r = Hota(RandomFrames(rng, 8, 3, 3), kGate);
    double sum = 0;
    for (int a = 0; a < kHotaAlphaCount; ++a) sum += r.HotaAt(a);
    EXPECT_NEAR(r.hota(), 100.0 * sum / kHotaAlphaCount, 1e-9);
  }
}

TEST(MotPropertiesTest, RangesAndRelabeling) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const auto frames = RandomFrames(rng, 8, 3, 4);
    const MotClassResult r = EvaluateMotClass(frames, kGate);
    EXPECT_GE(r.clear.moda(), r.clear.mota());
    EXPECT_EQ(r.clear.moda() == r.clear.mota(), r.clear.idsw == 0);
    EXPECT_LE(r.clear.mota(), 100.0);
    EXPECT_LE(r.clear.motp(), kGate);
    for (double v : {r.identity.idf1(), r.hota.hota(), r.hota.det_a(), r.hota.ass_a()}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 100.0);
    }

    // Bijective renaming of predicted ids.
    std::vector<int64_t> perm = {100, 101, 102, 103};
    std::shuffle(perm.begin(), perm.end(), rng);
    auto renamed = frames;
    for (auto& f : renamed) {
      for (auto& p : f.pred) p.id = perm[p.id - 100] * 7 + 3;
    }
    const MotClassResult s = EvaluateMotClass(renamed, kGate);
    EXPECT_EQ(s.clear.mota(), r.clear.mota());
    EXPECT_EQ(s.clear.idsw, r.clear.idsw);
    EXPECT_EQ(s.clear.frag, r.clear.frag);
    EXPECT_EQ(s.identity.idtp, r.identity.idtp);
    EXPECT_NEAR(s.hota.hota(), r.hota.hota(), 1e-9);
  }
}

TEST(CombineMotTest, PoolsCounts) {
  std::mt19937_64 rng(34);
  const MotClassResult a = EvaluateMotClass(RandomFrames(rng, 5, 2, 2), kGate);
  const MotClassResult b = EvaluateMotClass(RandomFrames(rng, 7, 3, 2), kGate);
  const std::vector<MotClassResult> ab = {a, b}, ba = {b, a};
  const MotClassResult x = CombineMot(ab), y = CombineMot(ba);
  EXPECT_EQ(x.clear.num_gt, a.clear.num_gt + b.clear.num_gt);
  EXPECT_EQ(x.clear.fp, a.clear.fp + b.clear.fp);
  EXPECT_EQ(x.identity.idtp, a.identity.idtp + b.identity.idtp);
  EXPECT_EQ(x.clear.mota(), y.clear.mota());
  EXPECT_NEAR(x.hota.hota(), y.hota.hota(), 1e-9);
  const std::vector<MotClassResult> only = {a};
  EXPECT_EQ(CombineMot(only).hota.hota(), a.hota.hota());
}

TEST(BuildMotFramesTest, FrameRangeMismatch) {
  Sequence seq;
  seq.frames.resize(3);
  for (int f = 0; f < 3; ++f) seq.frames[f].frame_index = f;
  TrackSet tracks;
  TrackedObject t;
  t.frame_index = 5;
  tracks.Add(t);
  try {
    BuildMotFrames(seq, tracks, ObjectClass::kMav, EvalFrame::kCamera);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFrameRangeMismatch);
  }
}

}  // namespace
}  // namespace laa3d
