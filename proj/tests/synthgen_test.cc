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

#include "laa3d/synthgen.h"

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "laa3d/error.h"
#include "laa3d/mot_metrics.h"

namespace laa3d {
namespace {

// Independent transcription of the documented generator.
uint64_t RefMix(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double RefUniform(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t slot, uint64_t k) {
  uint64_t h = RefMix(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
  for (auto [v, m] : {std::pair{frame, 0xD6E8FEB86659FD93ULL}, std::pair{slot, 0xA0761D6478BD642FULL},
                      std::pair{k, 0xE7037ED1A0B428DBULL}}) {
    h = RefMix(h ^ (v * m));
  }
  return std::ldexp(double(h >> 11), -53);
}

TEST(CounterRngTest, ReferenceVectors) {
  EXPECT_EQ(CounterRng(0).Bits(0, 0, 0, 0), 0x1957a7604e215178ULL);
  EXPECT_EQ(CounterRng(42).Bits(2, 7, 3, 0), 0x5d0452c1115695b8ULL);
  EXPECT_EQ(CounterRng(~0ULL).Bits(6, 123456, 1000000, 5), 0x16b142888d18ae8aULL);
  EXPECT_EQ(CounterRng(42).Uniform(2, 7, 3, 0), 0.36334721768920475);
}

TEST(CounterRngTest, DistributionSanity) {
  const CounterRng rng(9);
  double sum = 0, sq = 0, gsum = 0, gsq = 0, psum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.Uniform(0, 0, uint64_t(i), 0);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    sum += u;
    sq += u * u;
    const double g = rng.Gaussian(1, 0, uint64_t(i), 0);
    gsum += g;
    gsq += g * g;
    psum += rng.Poisson(2.5, 2, 0, uint64_t(i));
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(sq / n - (sum / n) * (sum / n), 1.0 / 12.0, 0.002);
  EXPECT_NEAR(gsum / n, 0.0, 0.01);
  EXPECT_NEAR(gsq / n, 1.0, 0.02);
  EXPECT_NEAR(psum / n, 2.5, 0.02);
  EXPECT_EQ(rng.Poisson(0.0, 2, 0, 0), 0);
}

TEST(TrajectoryTest, Linear) {
  TrajectorySpec spec;
  spec.velocity = {1, 0, 0};
  const std::vector<double> times = {0, 1, 2, 3, 4};
  const auto samples = MakeTrajectory(spec, times);
  for (int k = 0; k < 5; ++k) {
    EXPECT_EQ(samples[k].position, Eigen::Vector3d(k, 0, 0));
    EXPECT_TRUE(samples[k].rotation.isIdentity(1e-15));
  }
}

TEST(TrajectoryTest, CircleReturnsToStart) {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::kCircular;
  spec.center = {0, 0, 50};
  spec.radius = 5;
  const int duration = 40;
  const double fps = 10;
  spec.angular_rate = 2 * kPi / (duration / fps);
  std::vector<double> times;
  for (int k = 0; k <= duration; ++k) times.push_back(k / fps);
  const auto samples = MakeTrajectory(spec, times);
  EXPECT_LT((samples.back().position - samples.front().position).norm(), 1e-9);
  for (const auto& s : samples) {
    EXPECT_NEAR((s.position - spec.center).norm(), 5.0, 1e-9);
    EXPECT_NEAR(s.position.y(), 0.0, 1e-12);
    // Forward axis follows the velocity.
    EXPECT_LT((s.rotation.col(0) - s.velocity.normalized()).norm(), 1e-9);
  }
}

TEST(TrajectoryTest, WaypointInterpolation) {
  TrajectorySpec spec;
  spec.kind = TrajectoryKind::kWaypoint;
  spec.waypoints = {{0, {0, 0, 0}}, {10, {10, 0, 0}}};
  const std::vector<double> times = {-1, 3, 12};
  const auto s = MakeTrajectory(spec, times);
  EXPECT_TRUE(s[1].position.isApprox(Eigen::Vector3d(3, 0, 0)));
  EXPECT_EQ(s[0].position, Eigen::Vector3d(0, 0, 0));
  EXPECT_EQ(s[2].position, Eigen::Vector3d(10, 0, 0));
}

TEST(TrajectoryTest, DegenerateSpecs) {
  TrajectorySpec empty;
  empty.kind = TrajectoryKind::kWaypoint;
  const std::vector<double> t = {0};
  try {
    MakeTrajectory(empty, t);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateSpec);
  }
  TrajectorySpec circle;
  circle.kind = TrajectoryKind::kCircular;
  circle.radius = 0;
  EXPECT_THROW(MakeTrajectory(circle, t), Error);
  TrajectorySpec unordered;
  unordered.kind = TrajectoryKind::kWaypoint;
  unordered.waypoints = {{1, {0, 0, 0}}, {1, {1, 0, 0}}};
  EXPECT_THROW(MakeTrajectory(unordered, t), Error);
}

ScenarioSpec OneObject(const Eigen::Vector3d& start, const Eigen::Vector3d& velocity) {
  ScenarioSpec spec;
  spec.duration = 10;
  spec.fps = 1;
  ObjectSpec o;
  o.trajectory.start = start;
  o.trajectory.velocity = velocity;
  spec.objects.push_back(o);
  return spec;
}

TEST(SimulateTest, OneObjectTenFrames) {
  const Sequence seq = SimulateSequence(OneObject({0, 0, 30}, {1, 0, 0}));
  ASSERT_EQ(seq.frames.size(), 10u);
  for (const Frame& f : seq.frames) {
    ASSERT_EQ(f.objects.size(), 1u);
    EXPECT_EQ(f.objects[0].track_id, 0);
    EXPECT_TRUE(f.objects[0].box2d.has_value());
    EXPECT_NEAR(f.objects[0].box.pose().x(), double(f.frame_index), 1e-12);
  }
  EXPECT_NO_THROW(ValidateSequence(seq));
}

TEST(SimulateTest, Deterministic) {
  const ScenarioSpec spec = LaneScenario(9, 30, 25.0, 5);
  EXPECT_EQ(SimulateSequence(spec), SimulateSequence(spec));
  EXPECT_EQ(SerializeScenario(spec), SerializeScenario(LaneScenario(9, 30, 25.0, 5)));
}

TEST(SimulateTest, BehindCameraDropped) {
  // Depth 4.5 - t crosses zero during the sequence.
  SimulationLog log;
  const Sequence seq = SimulateSequence(OneObject({0, 0, 4.5}, {0, 0, -1}), &log);
  for (const Frame& f : seq.frames) {
    const double z = 4.5 - double(f.frame_index);
    if (f.objects.empty()) {
      EXPECT_LT(z - 0.5, 1.0) << f.frame_index;
    } else {
      EXPECT_GT(f.objects[0].box.pose().z(), 0.0);
    }
  }
  EXPECT_FALSE(log.dropped.empty());
  size_t kept = 0;
  for (const Frame& f : seq.frames) kept += f.objects.size();
  EXPECT_EQ(log.dropped.size() + kept, 10u);
}

TEST(CorruptTest, ZeroCorruptionIsExact) {
  const Sequence seq = SimulateSequence(LaneScenario(6, 20, 25.0, 3));
  const CorruptionOutput out = CorruptDetections(seq, CorruptionModel{}, DefaultClassConfig());
  EXPECT_TRUE(out.ledger.empty());
  size_t n = 0;
  for (const Frame& f : seq.frames) {
    const auto& dets = out.detections.frames.at(f.frame_index);
    ASSERT_EQ(dets.size(), f.objects.size());
    for (size_t i = 0; i < dets.size(); ++i) {
      EXPECT_EQ(dets[i].box, f.objects[i].box);
      EXPECT_EQ(dets[i].class_id, f.objects[i].class_id);
    }
    n += dets.size();
  }
  EXPECT_EQ(out.tracks.size(), n);
}

TEST(CorruptTest, DropCountMatchesRecomputation) {
  const Sequence seq = SimulateSequence(LaneScenario(100, 5, 20.0, 8));
  CorruptionModel model;
  model.fn_rate = 0.5;
  model.seed = 1234;
  const CorruptionOutput out = CorruptDetections(seq, model, DefaultClassConfig());
  std::set<std::pair<int64_t, int64_t>> expected;
  for (const Frame& f : seq.frames) {
    for (const auto& o : f.objects) {
      if (RefUniform(model.seed, 2, uint64_t(f.frame_index), uint64_t(o.track_id), 0) < 0.5) {
        expected.insert({f.frame_index, o.track_id});
      }
    }
  }
  std::set<std::pair<int64_t, int64_t>> ledger;
  for (const auto& d : out.ledger.drops) ledger.insert({d.frame_index, d.track_id});
  EXPECT_EQ(ledger, expected);
  size_t annotations = 0;
  for (const Frame& f : seq.frames) annotations += f.objects.size();
  EXPECT_EQ(out.detections.size(), annotations - expected.size());
  EXPECT_GT(expected.size(), annotations / 3);
  EXPECT_LT(expected.size(), 2 * annotations / 3);
}

TEST(CorruptTest, DeterministicAndSeeded) {
  const Sequence seq = SimulateSequence(LaneScenario(12, 30, 30.0, 4));
  CorruptionModel model;
  model.sigma = 0.2;
  model.fp_rate = 0.5;
  model.fn_rate = 0.1;
  model.idswitch_rate = 0.05;
  model.seed = 77;
  const CorruptionOutput a = CorruptDetections(seq, model, DefaultClassConfig());
  const CorruptionOutput b = CorruptDetections(seq, model, DefaultClassConfig());
  EXPECT_EQ(a.detections, b.detections);
  EXPECT_EQ(a.tracks, b.tracks);
  EXPECT_EQ(a.ledger.false_positives, b.ledger.false_positives);
  model.seed = 78;
  EXPECT_NE(CorruptDetections(seq, model, DefaultClassConfig()).detections, a.detections);
}

TEST(CorruptTest, ValidateRejectsBadRates) {
  CorruptionModel m;
  m.fn_rate = 1.5;
  EXPECT_THROW(m.Validate(), Error);
  m.fn_rate = 0;
  m.sigma = -1;
  EXPECT_THROW(m.Validate(), Error);
}

struct Expected {
  int64_t fn = 0, fp = 0, idsw = 0, num_gt = 0;
};

// Closed-form CLEAR counts from the ledger alone.
std::map<ObjectClass, Expected> LedgerCounts(const Sequence& seq, const CorruptionLedger& ledger) {
  std::map<ObjectClass, Expected> out;
  std::set<std::pair<int64_t, int64_t>> dropped;
  for (const auto& d : ledger.drops) dropped.insert({d.frame_index, d.track_id});
  for (const auto& e : ledger.false_positives) ++out[e.class_id].fp;
  std::map<int64_t, int64_t> emitted, last_seen;
  for (const Frame& f : seq.frames) {
    for (const auto& o : f.objects) emitted.emplace(o.track_id, o.track_id);
    for (const auto& s : ledger.switches) {
      if (s.frame_index == f.frame_index) std::swap(emitted[s.track_a], emitted[s.track_b]);
    }
    for (const auto& o : f.objects) {
      Expected& e = out[o.class_id];
      ++e.num_gt;
      if (dropped.count({f.frame_index, o.track_id})) {
        ++e.fn;
        continue;
      }
      auto it = last_seen.find(o.track_id);
      if (it != last_seen.end() && it->second != emitted[o.track_id]) ++e.idsw;
      last_seen[o.track_id] = emitted[o.track_id];
    }
  }
  return out;
}

TEST(CorruptTest, LedgerGivesClosedFormClear) {
  const ClassConfig config = DefaultClassConfig();
  const Sequence seq = SimulateSequence(LaneScenario(12, 60, 30.0, 6));
  CorruptionModel model;
  model.fp_rate = 0.5;
  model.fn_rate = 0.1;
  model.idswitch_rate = 0.05;
  model.seed = 19;
  const CorruptionOutput out = CorruptDetections(seq, model, config);
  ASSERT_FALSE(out.ledger.switches.empty());
  const auto expected = LedgerCounts(seq, out.ledger);
  for (ObjectClass c : kAllClasses) {
    const auto frames = BuildMotFrames(seq, out.tracks, c, EvalFrame::kCamera);
    const ClearResult r = ClearMot(frames, config[c].mot_threshold);
    const Expected& e = expected.at(c);
    EXPECT_EQ(r.num_gt, e.num_gt);
    EXPECT_EQ(r.fn, e.fn);
    EXPECT_EQ(r.fp, e.fp);
    EXPECT_EQ(r.idsw, e.idsw);
    EXPECT_EQ(r.matches, e.num_gt - e.fn);
    EXPECT_EQ(r.motp(), 0.0);
  }
}

TEST(ScenarioFormatTest, RoundtripAndErrors) {
  const std::string text =
      "LAA3D-SCENARIO v1\n"
      "# comment\n"
      "sequence demo\n"
      "seed 3\n"
      "frames 12\n"
      "fps 5\n"
      "camera 640 640 640 360 1280 720\n"
      "extrinsic 0 0 0 0 0 0\n"
      "object MAV quad 0.6 0.6 0.3 linear 0 0 30 1 0 0 aligned\n"
      "object Helicopter heavy 12 3 4 circular 0 0 150 20 0.2 0.5 fixed 0 0 1\n"
      "object eVTOL tilt 6 6 2 waypoint 2 0 0 0 80 2 10 0 80 aligned\n"
      "corruption 0.1 0.2 0.3 0.04 9\n";
  const ScenarioSpec spec = ParseScenario(text);
  EXPECT_EQ(spec.sequence_id, "demo");
  EXPECT_EQ(spec.duration, 12);
  ASSERT_EQ(spec.objects.size(), 3u);
  EXPECT_EQ(spec.objects[1].trajectory.kind, TrajectoryKind::kCircular);
  EXPECT_EQ(spec.objects[2].trajectory.waypoints.size(), 2u);
  ASSERT_TRUE(spec.corruption.has_value());
  EXPECT_EQ(spec.corruption->seed, 9u);
  const ScenarioSpec again = ParseScenario(SerializeScenario(spec));
  EXPECT_EQ(SerializeScenario(again), SerializeScenario(spec));
  EXPECT_EQ(SimulateSequence(again), SimulateSequence(spec));

  auto code = [](const std::string& t) -> std::optional<ErrorCode> {
    try {
      ParseScenario(t);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  auto input_error = [&](const std::string& t) {
    const auto c = code(t);
    return c.has_value() && IsInputError(*c);
  };
  EXPECT_EQ(code("LAA3D-SCENARIO v2\n"), ErrorCode::kParse);
  EXPECT_TRUE(input_error("LAA3D-SCENARIO v1\nframes ten\n"));
  EXPECT_TRUE(input_error("LAA3D-SCENARIO v1\nobject Blimp x 1 1 1 linear 0 0 1 0 0 0 aligned\n"));
  EXPECT_TRUE(input_error("LAA3D-SCENARIO v1\nobject MAV x 1 1 1 circular 0 0 1 -2 0 0 aligned\n"));
  EXPECT_TRUE(input_error("LAA3D-SCENARIO v1\ncorruption 0 2 0 0 1\n"));
}

TEST(LaneScenarioTest, VisibleAndSeparated) {
  const ClassConfig config = DefaultClassConfig();
  const ScenarioSpec spec = LaneScenario(20, 200, 30.0, 1);
  SimulationLog log;
  const Sequence seq = SimulateSequence(spec, &log);
  EXPECT_TRUE(log.dropped.empty());
  for (const Frame& f : seq.frames) {
    ASSERT_EQ(f.objects.size(), 20u);
    for (size_t i = 0; i < f.objects.size(); ++i) {
      for (size_t j = i + 1; j < f.objects.size(); ++j) {
        const double d = (f.objects[i].box.pose().position() - f.objects[j].box.pose().position()).norm();
        EXPECT_GT(d, 2 * config[f.objects[i].class_id].mot_threshold);
      }
    }
  }
}

}  // namespace
}  // namespace laa3d
