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

// 6-DoF poses, 3D/2D boxes, pinhole projection and rotation codecs.
//
// Conventions: camera frame is x right, y down, z forward along the optical
// axis. Euler angles compose intrinsically yaw -> pitch -> roll, i.e.
// R = Rz(yaw) * Ry(pitch) * Rx(roll). Angles are radians, wrapped to
// [-pi, pi).

#ifndef LAA3D_GEOMETRY_H_
#define LAA3D_GEOMETRY_H_

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace laa3d {

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle into [-pi, pi).
double WrapAngle(double angle);

inline double RadToDeg(double rad) { return rad * 180.0 / kPi; }
inline double DegToRad(double deg) { return deg * kPi / 180.0; }

class Pose6DoF {
 public:
  Pose6DoF() = default;
  // Throws kInvariant on non-finite input. Angles are wrapped.
  Pose6DoF(const Eigen::Vector3d& position, double roll, double pitch,
           double yaw);

  const Eigen::Vector3d& position() const { return position_; }
  double x() const { return position_.x(); }
  double y() const { return position_.y(); }
  double z() const { return position_.z(); }
  double roll() const { return roll_; }
  double pitch() const { return pitch_; }
  double yaw() const { return yaw_; }
  std::array<double, 3> angles() const { return {roll_, pitch_, yaw_}; }

  Eigen::Matrix3d rotation() const;
  // Maps a point expressed in the object frame into the parent frame.
  Eigen::Vector3d Transform(const Eigen::Vector3d& local) const;

  static Pose6DoF FromRotation(const Eigen::Vector3d& position,
                               const Eigen::Matrix3d& rotation);

  bool operator==(const Pose6DoF& other) const = default;

 private:
  Eigen::Vector3d position_ = Eigen::Vector3d::Zero();
  double roll_ = 0.0;
  double pitch_ = 0.0;
  double yaw_ = 0.0;
};

class Box3D {
 public:
  Box3D() = default;
  // Throws kInvariant unless length, width and height are all > 0.
  Box3D(const Pose6DoF& pose, double length, double width, double height);

  const Pose6DoF& pose() const { return pose_; }
  double length() const { return length_; }
  double width() const { return width_; }
  double height() const { return height_; }
  std::array<double, 3> size() const { return {length_, width_, height_}; }
  // Space diagonal; used as the object diameter for pose scoring.
  double diameter() const;

  Box3D WithPose(const Pose6DoF& pose) const {
    return Box3D(pose, length_, width_, height_);
  }

  bool operator==(const Box3D& other) const = default;

 private:
  Pose6DoF pose_;
  double length_ = 1.0;
  double width_ = 1.0;
  double height_ = 1.0;
};

struct CameraModel {
  double fx = 640.0;
  double fy = 640.0;
  double cx = 640.0;
  double cy = 360.0;
  int image_width = 1280;
  int image_height = 720;

  // Throws kInvariant if focal lengths are not positive or the principal
  // point lies outside the image.
  void Validate() const;

  bool operator==(const CameraModel& other) const = default;
};

struct Box2D {
  double u_min = 0.0;
  double v_min = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;

  double area() const { return (u_max - u_min) * (v_max - v_min); }
  bool operator==(const Box2D& other) const = default;
};

// Rigid world-to-camera transform: p_cam = rotation * p_world + translation.
struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d Apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }
  Eigen::Vector3d ApplyInverse(const Eigen::Vector3d& p) const {
    return rotation.transpose() * (p - translation);
  }
  RigidTransform Inverse() const;
  bool IsIdentity() const;

  bool operator==(const RigidTransform& other) const {
    return rotation == other.rotation && translation == other.translation;
  }
};

// Re-expresses a pose given in the frame `from` into the frame `to`, where
// `transform` maps `from` coordinates to `to` coordinates.
Pose6DoF TransformPose(const RigidTransform& transform, const Pose6DoF& pose);

Eigen::Matrix3d RotationFromEuler(double roll, double pitch, double yaw);

struct EulerAngles {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
  // Set when |pitch| is within 1e-6 of pi/2; roll is then forced to 0 and
  // yaw carries the combined rotation.
  bool gimbal_lock = false;
};

EulerAngles EulerFromRotation(const Eigen::Matrix3d& rotation);

// min(|a - b|, |a - (b + pi)|) with both differences wrapped to [-pi, pi).
// The result lies in [0, pi/2].
double MinimalAngleDiff(double theta, double theta_prime);

double CenterDistance(const Pose6DoF& a, const Pose6DoF& b);

// Corner order: bit 0 selects +/- length, bit 1 width, bit 2 height.
std::array<Eigen::Vector3d, 8> BoxCorners(const Box3D& box);

// Throws kBehindCamera when p.z() <= 0.
Eigen::Vector2d ProjectPoint(const CameraModel& camera,
                             const Eigen::Vector3d& p);

// Axis-aligned hull of the projected corners, before clipping.
Box2D ProjectBoxUnclipped(const CameraModel& camera, const Box3D& box);

// Clipped to the image. Throws kBehindCamera if any corner has z <= 0 and
// kFullyOutside if nothing of the hull lies inside the image.
Box2D ProjectBox(const CameraModel& camera, const Box3D& box);

double Iou2d(const Box2D& a, const Box2D& b);

enum class RotationMode { kSinCos, kQuaternion };

struct RotationEncoding {
  RotationMode mode = RotationMode::kSinCos;
  // kSinCos: sin/cos of roll, pitch, yaw (6 values).
  // kQuaternion: w, x, y, z with w >= 0 (4 values).
  std::vector<double> values;
};

RotationEncoding EncodeRotation(const Pose6DoF& pose, RotationMode mode);
// Throws kNonUnitEncoding if a sin/cos pair or the quaternion deviates from
// unit norm by more than 1e-6.
EulerAngles DecodeRotation(const RotationEncoding& encoding);

}  // namespace laa3d

#endif  // LAA3D_GEOMETRY_H_
