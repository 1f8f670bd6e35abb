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

#include "laa3d/tracking.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "laa3d/assignment.h"
#include "laa3d/error.h"

namespace laa3d {
namespace {

constexpr double kMaxInnovationCondition = 1e12;

using Matrix36d = Eigen::Matrix<double, 3, 6>;

Matrix36d ObservationMatrix() {
  Matrix36d h = Matrix36d::Zero();
  h.leftCols<3>().setIdentity();
  return h;
}

Matrix6d Symmetrized(const Matrix6d& m) { return 0.5 * (m + m.transpose()); }

// Per-frame bookkeeping for a live track.
struct LiveTrack {
  Track track;
  std::vector<TrackedObject> pending;  // outputs held while tentative
};

}  // namespace

KalmanState KalmanInit(const Eigen::Vector3d& position,
                       const Eigen::Vector3d& velocity, double position_var,
                       double velocity_var) {
  KalmanState s;
  s.mean << position, velocity;
  s.covariance.setZero();
  s.covariance.diagonal() << Eigen::Vector3d::Constant(position_var),
      Eigen::Vector3d::Constant(velocity_var);
  return s;
}

KalmanState KalmanPredict(const KalmanState& state, double dt,
                          const KalmanNoise& noise) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::kInvariant, "prediction step must be positive");
  }
  Matrix6d f = Matrix6d::Identity();
  f.topRightCorner<3, 3>() = dt * Eigen::Matrix3d::Identity();

  // Continuous white-noise acceleration, integrated over dt.
  const double q = noise.process_accel;
  Matrix6d process = Matrix6d::Zero();
  const Eigen::Matrix3d eye = Eigen::Matrix3d::Identity();
  process.topLeftCorner<3, 3>() = q * dt * dt * dt / 3.0 * eye;
  process.topRightCorner<3, 3>() = q * dt * dt / 2.0 * eye;
  process.bottomLeftCorner<3, 3>() = q * dt * dt / 2.0 * eye;
  process.bottomRightCorner<3, 3>() = q * dt * eye;

  KalmanState out;
  out.mean = f * state.mean;
  out.covariance = Symmetrized(f * state.covariance * f.transpose() + process);
  return out;
}

KalmanState KalmanUpdate(const KalmanState& state,
                         const Eigen::Vector3d& observation,
                         const KalmanNoise& noise) {
  const Matrix36d h = ObservationMatrix();
  const Eigen::Matrix3d r =
      noise.measurement_sigma * noise.measurement_sigma * Eigen::Matrix3d::Identity();
  Eigen::Matrix3d s = h * state.covariance * h.transpose() + r;
  s = 0.5 * (s + s.transpose());

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(s);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kMaxInnovationCondition) {
    throw Error(ErrorCode::kSingularInnovation,
                "innovation covariance is not invertible");
  }

  const Eigen::Matrix<double, 6, 3> gain =
      state.covariance * h.transpose() * s.inverse();
  const Matrix6d i_kh = Matrix6d::Identity() - gain * h;

  KalmanState out;
  out.mean = state.mean + gain * (observation - h * state.mean);
  out.covariance = Symmetrized(i_kh * state.covariance * i_kh.transpose() +
                               gain * r * gain.transpose());
  return out;
}

TrackerParams DefaultTrackerParams(const ClassConfig& config) {
  TrackerParams p;
  for (ObjectClass c : kAllClasses) {
    p.gates[static_cast<size_t>(c)] = config[c].mot_threshold;
  }
  return p;
}

std::vector<TrackerFrame> TrackerFramesFromDetections(const DetectionSet& dets,
                                                      double fps) {
  std::vector<TrackerFrame> frames;
  if (dets.frames.empty()) return frames;
  const int64_t first = dets.frames.begin()->first;
  const int64_t last = dets.frames.rbegin()->first;
  for (int64_t i = first; i <= last; ++i) {
    TrackerFrame f;
    f.frame_index = i;
    f.timestamp = double(i) / fps;
    if (auto it = dets.frames.find(i); it != dets.frames.end()) {
      f.detections = it->second;
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<TrackerFrame> TrackerFramesFromSequence(const Sequence& seq,
                                                    const DetectionSet& dets,
                                                    bool world_frame) {
  std::vector<TrackerFrame> frames;
  for (const Frame& sf : seq.frames) {
    TrackerFrame f;
    f.frame_index = sf.frame_index;
    f.timestamp = sf.timestamp;
    if (world_frame) f.world_to_camera = sf.WorldToCamera();
    if (auto it = dets.frames.find(sf.frame_index); it != dets.frames.end()) {
      f.detections = it->second;
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

TrackSet RunTracker(std::span<const TrackerFrame> frames,
                    const TrackerParams& params) {
  TrackSet out;
  std::vector<LiveTrack> live;
  int64_t next_id = 0;
  std::optional<double> prev_time;
  const double pos_var =
      params.noise.measurement_sigma * params.noise.measurement_sigma;

  for (const TrackerFrame& frame : frames) {
    double dt = 1.0 / params.fallback_fps;
    if (prev_time && frame.timestamp > *prev_time) dt = frame.timestamp - *prev_time;
    const bool first_frame = !prev_time.has_value();
    prev_time = frame.timestamp;

    for (LiveTrack& lt : live) {
      if (!first_frame) lt.track.state = KalmanPredict(lt.track.state, dt, params.noise);
      ++lt.track.age;
    }

    std::vector<Eigen::Vector3d> det_world;
    det_world.reserve(frame.detections.size());
    for (const Detection& d : frame.detections) {
      det_world.push_back(frame.world_to_camera.ApplyInverse(d.box.pose().position()));
    }

    std::vector<char> track_matched(live.size(), 0);
    std::vector<char> det_matched(frame.detections.size(), 0);

    auto emit = [&](LiveTrack& lt) {
      const Eigen::Vector3d cam = frame.world_to_camera.Apply(lt.track.state.position());
      const Pose6DoF& p = lt.track.last_box.pose();
      TrackedObject obj{frame.frame_index, lt.track.track_id, lt.track.class_id,
                        lt.track.last_score,
                        lt.track.last_box.WithPose(
                            Pose6DoF(cam, p.roll(), p.pitch(), p.yaw()))};
      if (lt.track.status == TrackStatus::kConfirmed) {
        out.Add(obj);
      } else {
        lt.pending.push_back(obj);
      }
    };

    for (ObjectClass cls : kAllClasses) {
      std::vector<size_t> rows, cols;
      for (size_t t = 0; t < live.size(); ++t) {
        if (live[t].track.class_id == cls) rows.push_back(t);
      }
      for (size_t d = 0; d < frame.detections.size(); ++d) {
        if (frame.detections[d].class_id == cls) cols.push_back(d);
      }
      if (rows.empty() || cols.empty()) continue;
      CostMatrix costs(rows.size(), cols.size());
      for (size_t i = 0; i < rows.size(); ++i) {
        for (size_t j = 0; j < cols.size(); ++j) {
          const double dist =
              (live[rows[i]].track.state.position() - det_world[cols[j]]).norm();
          if (dist <= params.gate(cls)) {
            costs.Set(i, j, dist);
          } else {
            costs.Forbid(i, j);
          }
        }
      }
      for (const auto& [i, j] : MinCostMaxCardinality(costs).pairs) {
        LiveTrack& lt = live[rows[i]];
        const Detection& det = frame.detections[cols[j]];
        lt.track.state = KalmanUpdate(lt.track.state, det_world[cols[j]], params.noise);
        lt.track.last_box = det.box;
        lt.track.last_score = det.score;
        ++lt.track.hits;
        lt.track.misses = 0;
        if (lt.track.status == TrackStatus::kTentative &&
            lt.track.hits >= params.min_hits) {
          lt.track.status = TrackStatus::kConfirmed;
          for (const TrackedObject& held : lt.pending) out.Add(held);
          lt.pending.clear();
        }
        emit(lt);
        track_matched[rows[i]] = 1;
        det_matched[cols[j]] = 1;
      }
    }

    for (size_t t = 0; t < live.size(); ++t) {
      if (track_matched[t]) continue;
      if (++live[t].track.misses > params.max_age) {
        live[t].track.status = TrackStatus::kDead;
      }
    }
    std::erase_if(live, [](const LiveTrack& lt) {
      return lt.track.status == TrackStatus::kDead;
    });

    for (size_t d = 0; d < frame.detections.size(); ++d) {
      if (det_matched[d]) continue;
      const Detection& det = frame.detections[d];
      LiveTrack lt;
      lt.track.track_id = next_id++;
      lt.track.class_id = det.class_id;
      lt.track.state = KalmanInit(det_world[d], Eigen::Vector3d::Zero(), pos_var,
                                  params.initial_velocity_var);
      lt.track.last_box = det.box;
      lt.track.last_score = det.score;
      lt.track.hits = 1;
      lt.track.age = 1;
      if (params.min_hits <= 1) lt.track.status = TrackStatus::kConfirmed;
      emit(lt);
      live.push_back(std::move(lt));
    }
  }

  for (auto& [_, objs] : out.frames) {
    std::sort(objs.begin(), objs.end(),
              [](const TrackedObject& a, const TrackedObject& b) {
                return a.track_id < b.track_id;
              });
  }
  return out;
}

std::vector<Eigen::Vector3d> PredictTrajectory(std::span<const TimedPoint> history,
                                               int horizon,
                                               const KalmanNoise& noise) {
  if (history.size() < 2) {
    throw Error(ErrorCode::kInsufficientHistory,
                "need at least 2 history points, got " +
                    std::to_string(history.size()));
  }
  for (size_t i = 1; i < history.size(); ++i) {
    if (!(history[i].t > history[i - 1].t)) {
      throw Error(ErrorCode::kInvariant, "history timestamps must increase");
    }
  }
  const double var = noise.measurement_sigma * noise.measurement_sigma;
  const double dt0 = history[1].t - history[0].t;
  KalmanState state = KalmanInit(
      history[1].position, (history[1].position - history[0].position) / dt0, var,
      2.0 * var / (dt0 * dt0));
  for (size_t i = 2; i < history.size(); ++i) {
    state = KalmanPredict(state, history[i].t - history[i - 1].t, noise);
    state = KalmanUpdate(state, history[i].position, noise);
  }
  const double step =
      (history.back().t - history.front().t) / double(history.size() - 1);
  std::vector<Eigen::Vector3d> out;
  out.reserve(std::max(horizon, 0));
  for (int k = 0; k < horizon; ++k) {
    state = KalmanPredict(state, step, noise);
    out.push_back(state.position());
  }
  return out;
}

DisplacementError AdeFde(std::span<const Eigen::Vector3d> predicted,
                         std::span<const Eigen::Vector3d> ground_truth) {
  if (predicted.empty() || predicted.size() != ground_truth.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "predicted has " + std::to_string(predicted.size()) +
                    " points, ground truth " + std::to_string(ground_truth.size()));
  }
  DisplacementError e;
  for (size_t i = 0; i < predicted.size(); ++i) {
    e.ade += (predicted[i] - ground_truth[i]).norm();
  }
  e.ade /= double(predicted.size());
  e.fde = (predicted.back() - ground_truth.back()).norm();
  return e;
}

}  // namespace laa3d
