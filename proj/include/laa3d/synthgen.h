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

// Deterministic synthetic scenarios: kinematic trajectories, annotated
// sequences, and seeded detection corruption with an exact event ledger.

#ifndef LAA3D_SYNTHGEN_H_
#define LAA3D_SYNTHGEN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "laa3d/data_model.h"
#include "laa3d/geometry.h"

namespace laa3d {

// Counter-based generator: every value is a pure function of
// (seed, stream, frame, slot, k). See docs/formats.md for the byte-level
// definition.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t Bits(uint64_t stream, uint64_t frame, uint64_t slot,
                uint64_t k) const;
  // Uniform in [0, 1) with 53 random bits.
  double Uniform(uint64_t stream, uint64_t frame, uint64_t slot,
                 uint64_t k) const;
  // Standard normal via Box-Muller; consumes draws k and k + 1.
  double Gaussian(uint64_t stream, uint64_t frame, uint64_t slot,
                  uint64_t k) const;
  // Knuth's multiplication method; consumes draws k, k + 1, ...
  int Poisson(double lambda, uint64_t stream, uint64_t frame,
              uint64_t slot) const;

 private:
  uint64_t seed_;
};

enum class TrajectoryKind { kLinear, kCircular, kWaypoint };
enum class OrientationRule { kVelocityAligned, kFixed };

struct Waypoint {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::kLinear;
  // kLinear
  Eigen::Vector3d start = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  // kCircular: horizontal circle (x-z plane) around center.
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 1.0;
  double angular_rate = 0.0;  // rad/s
  double phase = 0.0;         // rad
  // kWaypoint: strictly increasing times.
  std::vector<Waypoint> waypoints;

  OrientationRule orientation = OrientationRule::kVelocityAligned;
  double roll = 0.0, pitch = 0.0, yaw = 0.0;  // kFixed
};

struct TrajectorySample {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();  // object -> world
};

// Throws kDegenerateSpec for empty waypoint lists, unordered waypoint
// times or a non-positive radius.
std::vector<TrajectorySample> MakeTrajectory(const TrajectorySpec& spec,
                                             std::span<const double> times);

struct ObjectSpec {
  ObjectClass class_id = ObjectClass::kMav;
  std::string fine_class = "synthetic";
  double length = 1.0, width = 1.0, height = 1.0;
  TrajectorySpec trajectory;
};

struct CorruptionModel {
  double sigma = 0.0;          // meters, per axis
  double fp_rate = 0.0;        // expected false positives per frame
  double fn_rate = 0.0;        // per object and frame
  double idswitch_rate = 0.0;  // per track and frame
  double tp_score_lo = 0.5, tp_score_hi = 1.0;
  double fp_score_lo = 0.05, fp_score_hi = 0.5;
  uint64_t seed = 0;

  void Validate() const;
};

struct ScenarioSpec {
  std::string sequence_id = "synthetic";
  uint64_t seed = 0;
  int duration = 10;  // frames
  double fps = 10.0;
  CameraModel camera;
  Pose6DoF extrinsic;  // world -> camera
  std::vector<ObjectSpec> objects;
  std::optional<CorruptionModel> corruption;
};

struct SimulationLog {
  // (frame_index, track_id) of annotations dropped because the object was
  // behind the camera or outside the image.
  std::vector<std::pair<int64_t, int64_t>> dropped;
};

Sequence SimulateSequence(const ScenarioSpec& spec, SimulationLog* log = nullptr);

struct DropEvent {
  int64_t frame_index;
  int64_t track_id;
  bool operator==(const DropEvent&) const = default;
};

struct FalsePositiveEvent {
  int64_t frame_index;
  ObjectClass class_id;
  int64_t emitted_id;
  Eigen::Vector3d position;
  bool operator==(const FalsePositiveEvent& o) const {
    return frame_index == o.frame_index && class_id == o.class_id &&
           emitted_id == o.emitted_id && position == o.position;
  }
};

struct SwitchEvent {
  int64_t frame_index;
  int64_t track_a;
  int64_t track_b;
  bool operator==(const SwitchEvent&) const = default;
};

struct CorruptionLedger {
  std::vector<DropEvent> drops;
  std::vector<FalsePositiveEvent> false_positives;
  // Label swaps: from this frame on, the two ground-truth tracks emit each
  // other's previous ids.
  std::vector<SwitchEvent> switches;

  bool empty() const {
    return drops.empty() && false_positives.empty() && switches.empty();
  }
};

// Ids emitted for false positives start here.
inline constexpr int64_t kFalsePositiveIdBase = 1000000000;

struct CorruptionOutput {
  DetectionSet detections;
  TrackSet tracks;  // same boxes as `detections`, with emitted ids
  CorruptionLedger ledger;
};

// False positives are placed at least 2x the class MOT threshold away from
// every ground truth of their class in the frame.
CorruptionOutput CorruptDetections(const Sequence& seq,
                                   const CorruptionModel& model,
                                   const ClassConfig& config);

// Parses the LAA3D-SCENARIO v1 text format. Input errors raise kParse,
// kSchema or kDegenerateSpec.
ScenarioSpec ParseScenario(std::string_view text);
ScenarioSpec LoadScenario(const std::filesystem::path& path);
std::string SerializeScenario(const ScenarioSpec& spec);

// Grid of objects on parallel depth-axis lanes `spacing` meters apart,
// classes cycling MAV, eVTOL, Helicopter. Camera at the world origin.
ScenarioSpec LaneScenario(int num_objects, int duration, double spacing,
                          uint64_t seed);

}  // namespace laa3d

#endif  // LAA3D_SYNTHGEN_H_
