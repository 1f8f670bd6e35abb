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

#include "laa3d/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "laa3d/error.h"

namespace laa3d {
namespace {

constexpr double kGimbalTolerance = 1e-6;
constexpr double kUnitTolerance = 1e-6;

}  // namespace

double WrapAngle(double angle) {
  double wrapped = std::fmod(angle + kPi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  wrapped -= kPi;
  // fmod can land exactly on +pi after the shift for inputs just below an
  // odd multiple of pi.
  if (wrapped >= kPi) wrapped -= 2.0 * kPi;
  return wrapped;
}

Pose6DoF::Pose6DoF(const Eigen::Vector3d& position, double roll, double pitch,
                   double yaw)
    : position_(position) {
  if (!position.allFinite() || !std::isfinite(roll) || !std::isfinite(pitch) ||
      !std::isfinite(yaw)) {
    throw Error(ErrorCode::kInvariant, "pose has non-finite component");
  }
  roll_ = WrapAngle(roll);
  pitch_ = WrapAngle(pitch);
  yaw_ = WrapAngle(yaw);
}

Eigen::Matrix3d Pose6DoF::rotation() const {
  return RotationFromEuler(roll_, pitch_, yaw_);
}

Eigen::Vector3d Pose6DoF::Transform(const Eigen::Vector3d& local) const {
  return rotation() * local + position_;
}

Pose6DoF Pose6DoF::FromRotation(const Eigen::Vector3d& position,
                                const Eigen::Matrix3d& rotation) {
  const EulerAngles e = EulerFromRotation(rotation);
  return Pose6DoF(position, e.roll, e.pitch, e.yaw);
}

Box3D::Box3D(const Pose6DoF& pose, double length, double width, double height)
    : pose_(pose), length_(length), width_(width), height_(height) {
  if (!(length > 0.0) || !(width > 0.0) || !(height > 0.0) ||
      !std::isfinite(length) || !std::isfinite(width) ||
      !std::isfinite(height)) {
    throw Error(ErrorCode::kInvariant, "box dimensions must be positive");
  }
}

double Box3D::diameter() const {
  return std::sqrt(length_ * length_ + width_ * width_ + height_ * height_);
}

void CameraModel::Validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw Error(ErrorCode::kInvariant, "focal lengths must be positive");
  }
  if (image_width <= 0 || image_height <= 0) {
    throw Error(ErrorCode::kInvariant, "image dimensions must be positive");
  }
  if (!(cx >= 0.0 && cx <= image_width && cy >= 0.0 && cy <= image_height)) {
    throw Error(ErrorCode::kInvariant, "principal point outside image");
  }
}

RigidTransform RigidTransform::Inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

bool RigidTransform::IsIdentity() const {
  return rotation == Eigen::Matrix3d::Identity() &&
         translation == Eigen::Vector3d::Zero();
}

Pose6DoF TransformPose(const RigidTransform& transform, const Pose6DoF& pose) {
  if (transform.IsIdentity()) return pose;
  return Pose6DoF::FromRotation(transform.Apply(pose.position()),
                                transform.rotation * pose.rotation());
}

Eigen::Matrix3d RotationFromEuler(double roll, double pitch, double yaw) {
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  Eigen::Matrix3d r;
  r << cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
      sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
      -sp, cp * sr, cp * cr;
  return r;
}

EulerAngles EulerFromRotation(const Eigen::Matrix3d& r) {
  EulerAngles e;
  e.pitch = std::atan2(-r(2, 0), std::hypot(r(0, 0), r(1, 0)));
  if (std::abs(std::abs(e.pitch) - kPi / 2.0) < kGimbalTolerance) {
    e.gimbal_lock = true;
    e.roll = 0.0;
    e.yaw = WrapAngle(std::atan2(-r(0, 1), r(1, 1)));
    return e;
  }
  e.roll = WrapAngle(std::atan2(r(2, 1), r(2, 2)));
  e.yaw = WrapAngle(std::atan2(r(1, 0), r(0, 0)));
  return e;
}

double MinimalAngleDiff(double theta, double theta_prime) {
  const double direct = std::abs(WrapAngle(theta - theta_prime));
  const double flipped = std::abs(WrapAngle(theta - (theta_prime + kPi)));
  return std::min(direct, flipped);
}

double CenterDistance(const Pose6DoF& a, const Pose6DoF& b) {
  return (a.position() - b.position()).norm();
}

std::array<Eigen::Vector3d, 8> BoxCorners(const Box3D& box) {
  const Eigen::Matrix3d rot = box.pose().rotation();
  const Eigen::Vector3d half(box.length() / 2.0, box.width() / 2.0,
                             box.height() / 2.0);
  std::array<Eigen::Vector3d, 8> corners;
  for (int i = 0; i < 8; ++i) {
    const Eigen::Vector3d local((i & 1) ? half.x() : -half.x(),
                                (i & 2) ? half.y() : -half.y(),
                                (i & 4) ? half.z() : -half.z());
    corners[i] = rot * local + box.pose().position();
  }
  return corners;
}

Eigen::Vector2d ProjectPoint(const CameraModel& camera,
                             const Eigen::Vector3d& p) {
  if (!(p.z() > 0.0)) {
    throw Error(ErrorCode::kBehindCamera,
                "point at z=" + std::to_string(p.z()));
  }
  return {camera.cx + camera.fx * p.x() / p.z(),
          camera.cy + camera.fy * p.y() / p.z()};
}

Box2D ProjectBoxUnclipped(const CameraModel& camera, const Box3D& box) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  Box2D hull{kInf, kInf, -kInf, -kInf};
  for (const Eigen::Vector3d& corner : BoxCorners(box)) {
    const Eigen::Vector2d uv = ProjectPoint(camera, corner);
    hull.u_min = std::min(hull.u_min, uv.x());
    hull.v_min = std::min(hull.v_min, uv.y());
    hull.u_max = std::max(hull.u_max, uv.x());
    hull.v_max = std::max(hull.v_max, uv.y());
  }
  return hull;
}

Box2D ProjectBox(const CameraModel& camera, const Box3D& box) {
  const Box2D hull = ProjectBoxUnclipped(camera, box);
  Box2D clipped;
  clipped.u_min = std::clamp(hull.u_min, 0.0, double(camera.image_width));
  clipped.u_max = std::clamp(hull.u_max, 0.0, double(camera.image_width));
  clipped.v_min = std::clamp(hull.v_min, 0.0, double(camera.image_height));
  clipped.v_max = std::clamp(hull.v_max, 0.0, double(camera.image_height));
  if (!(clipped.u_min < clipped.u_max) || !(clipped.v_min < clipped.v_max)) {
    throw Error(ErrorCode::kFullyOutside, "projected box misses the image");
  }
  return clipped;
}

double Iou2d(const Box2D& a, const Box2D& b) {
  const double iw =
      std::min(a.u_max, b.u_max) - std::max(a.u_min, b.u_min);
  const double ih =
      std::min(a.v_max, b.v_max) - std::max(a.v_min, b.v_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

RotationEncoding EncodeRotation(const Pose6DoF& pose, RotationMode mode) {
  RotationEncoding enc;
  enc.mode = mode;
  if (mode == RotationMode::kSinCos) {
    for (double a : pose.angles()) {
      enc.values.push_back(std::sin(a));
      enc.values.push_back(std::cos(a));
    }
    return enc;
  }
  const Eigen::Quaterniond q =
      Eigen::AngleAxisd(pose.yaw(), Eigen::Vector3d::UnitZ()) *
      Eigen::AngleAxisd(pose.pitch(), Eigen::Vector3d::UnitY()) *
      Eigen::AngleAxisd(pose.roll(), Eigen::Vector3d::UnitX());
  const double sign = q.w() < 0.0 ? -1.0 : 1.0;
  enc.values = {sign * q.w(), sign * q.x(), sign * q.y(), sign * q.z()};
  return enc;
}

EulerAngles DecodeRotation(const RotationEncoding& enc) {
  if (enc.mode == RotationMode::kSinCos) {
    if (enc.values.size() != 6) {
      throw Error(ErrorCode::kNonUnitEncoding, "sin-cos encoding needs 6 values");
    }
    double angles[3];
    for (int i = 0; i < 3; ++i) {
      const double s = enc.values[2 * i], c = enc.values[2 * i + 1];
      if (std::abs(s * s + c * c - 1.0) > kUnitTolerance) {
        throw Error(ErrorCode::kNonUnitEncoding,
                    "sin/cos pair " + std::to_string(i) + " is not unit");
      }
      angles[i] = WrapAngle(std::atan2(s, c));
    }
    return {angles[0], angles[1], angles[2], false};
  }
  if (enc.values.size() != 4) {
    throw Error(ErrorCode::kNonUnitEncoding, "quaternion needs 4 values");
  }
  Eigen::Quaterniond q(enc.values[0], enc.values[1], enc.values[2],
                       enc.values[3]);
  if (std::abs(q.norm() - 1.0) > kUnitTolerance) {
    throw Error(ErrorCode::kNonUnitEncoding, "quaternion is not unit norm");
  }
  if (q.w() < 0.0) q.coeffs() *= -1.0;
  return EulerFromRotation(q.toRotationMatrix());
}

}  // namespace laa3d
