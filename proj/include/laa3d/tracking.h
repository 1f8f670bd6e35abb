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

// Constant-velocity Kalman filtering, the distance-gated 3D tracker and the
// trajectory prediction baseline.

#ifndef LAA3D_TRACKING_H_
#define LAA3D_TRACKING_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "laa3d/data_model.h"
#include "laa3d/geometry.h"

namespace laa3d {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

// State (x, y, z, vx, vy, vz) with its covariance.
struct KalmanState {
  Vector6d mean = Vector6d::Zero();
  Matrix6d covariance = Matrix6d::Identity();

  Eigen::Vector3d position() const { return mean.head<3>(); }
  Eigen::Vector3d velocity() const { return mean.tail<3>(); }
};

struct KalmanNoise {
  // White-noise acceleration spectral density, (m/s^2)^2 * s.
  double process_accel = 1.0;
  // Per-axis standard deviation of position observations, meters.
  double measurement_sigma = 0.5;
};

KalmanState KalmanInit(const Eigen::Vector3d& position,
                       const Eigen::Vector3d& velocity, double position_var,
                       double velocity_var);

// Constant-velocity transition over dt > 0 seconds.
KalmanState KalmanPredict(const KalmanState& state, double dt,
                          const KalmanNoise& noise);

// Position observation update (Joseph form). Throws kSingularInnovation
// when the innovation covariance has condition number above 1e12.
KalmanState KalmanUpdate(const KalmanState& state,
                         const Eigen::Vector3d& observation,
                         const KalmanNoise& noise);

struct TrackerParams {
  int max_age = 2;   // consecutive misses tolerated
  int min_hits = 3;  // matches before a track is emitted
  std::array<double, 3> gates{4.0, 6.0, 12.0};  // per class, meters
  KalmanNoise noise;
  double initial_velocity_var = 100.0;
  double fallback_fps = 10.0;

  double gate(ObjectClass c) const { return gates[static_cast<size_t>(c)]; }
};

TrackerParams DefaultTrackerParams(const ClassConfig& config);

enum class TrackStatus { kTentative, kConfirmed, kDead };

struct Track {
  int64_t track_id = 0;
  ObjectClass class_id = ObjectClass::kMav;
  KalmanState state;
  Box3D last_box;
  double last_score = 1.0;
  int hits = 0;
  int age = 0;
  int misses = 0;
  TrackStatus status = TrackStatus::kTentative;
};

struct TrackerFrame {
  int64_t frame_index = 0;
  double timestamp = 0.0;
  std::vector<Detection> detections;
  // Camera pose for world-frame tracking (identity keeps camera frame).
  RigidTransform world_to_camera;
};

// Builds tracker input for every frame in [first, last] detection frame,
// with timestamps frame_index / fps.
std::vector<TrackerFrame> TrackerFramesFromDetections(const DetectionSet& dets,
                                                      double fps);

// Frames, timestamps and (optionally) extrinsics taken from a sequence.
std::vector<TrackerFrame> TrackerFramesFromSequence(const Sequence& seq,
                                                    const DetectionSet& dets,
                                                    bool world_frame);

// Runs the tracker over frames in order and returns emitted tracks in the
// detections' (camera) frame. Deterministic.
TrackSet RunTracker(std::span<const TrackerFrame> frames,
                    const TrackerParams& params);

struct TimedPoint {
  double t = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

// Fits a constant-velocity filter to the history (initialized from the
// first two points, updated with the rest) and extrapolates `horizon`
// steps at the mean history interval. Throws kInsufficientHistory.
std::vector<Eigen::Vector3d> PredictTrajectory(std::span<const TimedPoint> history,
                                               int horizon,
                                               const KalmanNoise& noise = {});

struct DisplacementError {
  double ade = 0.0;
  double fde = 0.0;
};

// Throws kLengthMismatch unless both have the same non-zero length.
DisplacementError AdeFde(std::span<const Eigen::Vector3d> predicted,
                         std::span<const Eigen::Vector3d> ground_truth);

}  // namespace laa3d

#endif  // LAA3D_TRACKING_H_
