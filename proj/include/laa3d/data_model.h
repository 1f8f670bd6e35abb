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

// Dataset schema and the line-delimited text formats for sequences,
// detections and tracks. The grammar is documented in docs/formats.md.

#ifndef LAA3D_DATA_MODEL_H_
#define LAA3D_DATA_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laa3d/geometry.h"

namespace laa3d {

enum class ObjectClass { kMav = 0, kEvtol = 1, kHelicopter = 2 };

inline constexpr std::array<ObjectClass, 3> kAllClasses = {
    ObjectClass::kMav, ObjectClass::kEvtol, ObjectClass::kHelicopter};

std::string_view ClassName(ObjectClass c);
// Accepts the canonical names "MAV", "eVTOL", "Helicopter".
std::optional<ObjectClass> ParseClassName(std::string_view name);

struct AnnotatedObject {
  ObjectClass class_id = ObjectClass::kMav;
  std::string fine_class = "unknown";
  int64_t track_id = 0;
  Box3D box;
  std::optional<Box2D> box2d;

  bool operator==(const AnnotatedObject&) const = default;
};

struct Frame {
  int64_t frame_index = 0;
  double timestamp = 0.0;
  CameraModel camera;
  // World-to-camera transform: p_cam = extrinsic.Transform(p_world).
  Pose6DoF extrinsic;
  std::vector<AnnotatedObject> objects;

  RigidTransform WorldToCamera() const;
  bool operator==(const Frame&) const = default;
};

struct Sequence {
  std::string sequence_id = "seq";
  double fps = 10.0;
  std::vector<Frame> frames;

  bool operator==(const Sequence&) const = default;
};

// Throws kInvariant naming the offending frame.
void ValidateSequence(const Sequence& seq);

struct Detection {
  int64_t frame_index = 0;
  ObjectClass class_id = ObjectClass::kMav;
  double score = 1.0;
  Box3D box;

  bool operator==(const Detection&) const = default;
};

// Detections keyed by frame index. Frames without an entry have none.
struct DetectionSet {
  std::map<int64_t, std::vector<Detection>> frames;

  size_t size() const;
  void Add(const Detection& d) { frames[d.frame_index].push_back(d); }
  bool operator==(const DetectionSet&) const = default;
};

struct TrackedObject {
  int64_t frame_index = 0;
  int64_t track_id = 0;
  ObjectClass class_id = ObjectClass::kMav;
  double score = 1.0;
  Box3D box;

  bool operator==(const TrackedObject&) const = default;
};

struct TrackSet {
  std::map<int64_t, std::vector<TrackedObject>> frames;

  size_t size() const;
  void Add(const TrackedObject& t) { frames[t.frame_index].push_back(t); }
  bool operator==(const TrackSet&) const = default;
};

// Throws kInvariant on a repeated track id within one frame.
void ValidateTrackSet(const TrackSet& tracks);

// Ground-truth annotations of a sequence viewed as tracks (score 1).
TrackSet GroundTruthTracks(const Sequence& seq);

struct ClassParams {
  std::array<double, 4> ap_thresholds{};  // meters, strictly increasing
  double tp_max_translation = 0.0;        // meters
  double tp_max_rotation = 0.0;           // degrees
  double tp_max_size = 0.0;               // relative fraction (or meters)
  double mot_threshold = 0.0;             // meters
  double depth_range = 0.0;               // meters

  bool operator==(const ClassParams&) const = default;
};

struct ClassConfig {
  std::array<ClassParams, 3> params;

  const ClassParams& operator[](ObjectClass c) const {
    return params[static_cast<size_t>(c)];
  }
  ClassParams& operator[](ObjectClass c) {
    return params[static_cast<size_t>(c)];
  }
  void Validate() const;
  bool operator==(const ClassConfig&) const = default;
};

ClassConfig DefaultClassConfig();

// Text (de)serialization. Parse functions throw kParse / kSchema /
// kInvariant / kScoreRange with the line number in the message.
std::string SerializeSequence(const Sequence& seq);
Sequence ParseSequence(std::string_view text);
std::string SerializeDetections(const DetectionSet& dets);
DetectionSet ParseDetections(std::string_view text);
std::string SerializeTracks(const TrackSet& tracks);
TrackSet ParseTracks(std::string_view text);

// File wrappers. Failures to open/read/write raise kIo naming the path.
Sequence LoadSequence(const std::filesystem::path& path);
void WriteSequence(const Sequence& seq, const std::filesystem::path& path);
DetectionSet LoadDetections(const std::filesystem::path& path);
void WriteDetections(const DetectionSet& dets,
                     const std::filesystem::path& path);
TrackSet LoadTracks(const std::filesystem::path& path);
void WriteTracks(const TrackSet& tracks, const std::filesystem::path& path);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Fixed 9-significant-digit rendering used by every writer.
std::string FormatNumber(double v);

}  // namespace laa3d

#endif  // LAA3D_DATA_MODEL_H_
