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

#include "laa3d/data_model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "laa3d/error.h"

namespace laa3d {
namespace {

constexpr std::string_view kSequenceHeader = "LAA3D-SEQ v1";
constexpr std::string_view kDetectionHeader = "LAA3D-DET v1";
constexpr std::string_view kTrackHeader = "LAA3D-TRK v1";

constexpr size_t kFrameFields = 15;
constexpr size_t kObjectFieldsWithBox = 17;
constexpr size_t kObjectFieldsNoBox = 14;
constexpr size_t kDetectionFields = 12;
constexpr size_t kTrackFields = 13;

struct Line {
  size_t number = 0;
  std::vector<std::string_view> tokens;
};

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Tokenize(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

// Splits into non-empty, non-comment lines. The first content line must be
// the header; returns the remaining lines.
std::vector<Line> SplitRecords(std::string_view text, std::string_view header,
                               bool allow_empty) {
  std::vector<Line> lines;
  bool saw_header = false;
  size_t number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    const std::string_view raw = Trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (raw.empty() || raw.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    if (!saw_header) {
      if (raw != header) {
        throw Error(ErrorCode::kParse,
                    "line " + std::to_string(number) + ": expected header '" +
                        std::string(header) + "'");
      }
      saw_header = true;
    } else {
      lines.push_back({number, Tokenize(raw)});
    }
    if (end == text.size()) break;
  }
  if (!saw_header && !allow_empty) {
    throw Error(ErrorCode::kParse,
                "missing header '" + std::string(header) + "'");
  }
  return lines;
}

std::string At(const Line& line) {
  return "line " + std::to_string(line.number) + ": ";
}

double ParseDouble(const Line& line, size_t idx) {
  const std::string_view tok = line.tokens[idx];
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kParse, At(line) + "bad number '" +
                                       std::string(tok) + "' in field " +
                                       std::to_string(idx));
  }
  return v;
}

int64_t ParseInt(const Line& line, size_t idx) {
  const std::string_view tok = line.tokens[idx];
  int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::kParse, At(line) + "bad integer '" +
                                       std::string(tok) + "' in field " +
                                       std::to_string(idx));
  }
  return v;
}

ObjectClass ParseClassField(const Line& line, size_t idx) {
  const auto c = ParseClassName(line.tokens[idx]);
  if (!c) {
    throw Error(ErrorCode::kParse, At(line) + "unknown class '" +
                                       std::string(line.tokens[idx]) + "'");
  }
  return *c;
}

void ExpectFields(const Line& line, size_t expected) {
  if (line.tokens.size() != expected) {
    throw Error(ErrorCode::kSchema,
                At(line) + "record '" + std::string(line.tokens[0]) +
                    "' expects " + std::to_string(expected) +
                    " fields, got " + std::to_string(line.tokens.size()));
  }
}

// Parses 9 consecutive numbers x y z roll pitch yaw l w h into a Box3D,
// converting invariant violations into line-tagged errors.
Box3D ParseBox(const Line& line, size_t first) {
  double v[9];
  for (size_t i = 0; i < 9; ++i) v[i] = ParseDouble(line, first + i);
  try {
    return Box3D(Pose6DoF({v[0], v[1], v[2]}, v[3], v[4], v[5]), v[6], v[7],
                 v[8]);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvariant, At(line) + e.what());
  }
}

void AppendBox(std::string& out, const Box3D& box) {
  const Pose6DoF& p = box.pose();
  for (double v : {p.x(), p.y(), p.z(), p.roll(), p.pitch(), p.yaw(),
                   box.length(), box.width(), box.height()}) {
    out += ' ';
    out += FormatNumber(v);
  }
}

bool HasWhitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

}  // namespace

std::string_view ClassName(ObjectClass c) {
  switch (c) {
    case ObjectClass::kMav: return "MAV";
    case ObjectClass::kEvtol: return "eVTOL";
    case ObjectClass::kHelicopter: return "Helicopter";
  }
  return "?";
}

std::optional<ObjectClass> ParseClassName(std::string_view name) {
  for (ObjectClass c : kAllClasses) {
    if (ClassName(c) == name) return c;
  }
  return std::nullopt;
}

RigidTransform Frame::WorldToCamera() const {
  RigidTransform t;
  t.rotation = extrinsic.rotation();
  t.translation = extrinsic.position();
  return t;
}

size_t DetectionSet::size() const {
  size_t n = 0;
  for (const auto& [_, dets] : frames) n += dets.size();
  return n;
}

size_t TrackSet::size() const {
  size_t n = 0;
  for (const auto& [_, objs] : frames) n += objs.size();
  return n;
}

std::string FormatNumber(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void ValidateSequence(const Sequence& seq) {
  if (seq.sequence_id.empty() || HasWhitespace(seq.sequence_id)) {
    throw Error(ErrorCode::kInvariant,
                "sequence id must be a non-empty token without whitespace");
  }
  if (!(seq.fps > 0.0) || !std::isfinite(seq.fps)) {
    throw Error(ErrorCode::kInvariant, "fps must be positive");
  }
  if (seq.frames.empty()) {
    throw Error(ErrorCode::kInvariant,
                "sequence '" + seq.sequence_id + "' has no frames");
  }
  const Frame& first = seq.frames.front();
  for (size_t i = 0; i < seq.frames.size(); ++i) {
    const Frame& f = seq.frames[i];
    const std::string where = "frame " + std::to_string(f.frame_index) + ": ";
    if (f.frame_index < 0) {
      throw Error(ErrorCode::kInvariant, where + "negative frame index");
    }
    if (!std::isfinite(f.timestamp)) {
      throw Error(ErrorCode::kInvariant, where + "non-finite timestamp");
    }
    if (i > 0) {
      const Frame& prev = seq.frames[i - 1];
      if (f.frame_index <= prev.frame_index) {
        throw Error(ErrorCode::kInvariant,
                    where + "frame index not strictly increasing");
      }
      if (f.timestamp < prev.timestamp) {
        throw Error(ErrorCode::kInvariant, where + "timestamp decreases");
      }
    }
    try {
      f.camera.Validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvariant, where + e.what());
    }
    if (f.camera.image_width != first.camera.image_width ||
        f.camera.image_height != first.camera.image_height) {
      throw Error(ErrorCode::kInvariant,
                  where + "image dimensions differ within the sequence");
    }
    std::set<int64_t> ids;
    for (const AnnotatedObject& obj : f.objects) {
      if (obj.track_id < 0) {
        throw Error(ErrorCode::kInvariant, where + "negative track id");
      }
      if (!ids.insert(obj.track_id).second) {
        throw Error(ErrorCode::kInvariant,
                    where + "duplicate track id " +
                        std::to_string(obj.track_id));
      }
      if (obj.fine_class.empty() || HasWhitespace(obj.fine_class)) {
        throw Error(ErrorCode::kInvariant,
                    where + "fine class must be a single token");
      }
      if (obj.box2d && !(obj.box2d->u_min <= obj.box2d->u_max &&
                         obj.box2d->v_min <= obj.box2d->v_max)) {
        throw Error(ErrorCode::kInvariant, where + "inverted 2D box");
      }
    }
  }
}

void ValidateTrackSet(const TrackSet& tracks) {
  for (const auto& [frame, objs] : tracks.frames) {
    std::set<int64_t> ids;
    for (const TrackedObject& t : objs) {
      if (t.frame_index != frame) {
        throw Error(ErrorCode::kInvariant, "track stored under wrong frame");
      }
      if (!ids.insert(t.track_id).second) {
        throw Error(ErrorCode::kInvariant,
                    "frame " + std::to_string(frame) +
                        ": duplicate track id " + std::to_string(t.track_id));
      }
    }
  }
}

TrackSet GroundTruthTracks(const Sequence& seq) {
  TrackSet out;
  for (const Frame& f : seq.frames) {
    auto& objs = out.frames[f.frame_index];
    for (const AnnotatedObject& o : f.objects) {
      objs.push_back({f.frame_index, o.track_id, o.class_id, 1.0, o.box});
    }
  }
  return out;
}

void ClassConfig::Validate() const {
  for (ObjectClass c : kAllClasses) {
    const ClassParams& p = (*this)[c];
    const std::string name(ClassName(c));
    for (size_t i = 0; i < p.ap_thresholds.size(); ++i) {
      if (!(p.ap_thresholds[i] > 0.0) ||
          (i > 0 && !(p.ap_thresholds[i] > p.ap_thresholds[i - 1]))) {
        throw Error(ErrorCode::kInvariant,
                    name + ": AP thresholds must be positive and increasing");
      }
    }
    if (!(p.tp_max_translation > 0.0) || !(p.tp_max_rotation > 0.0) ||
        !(p.tp_max_size > 0.0) || !(p.mot_threshold > 0.0) ||
        !(p.depth_range > 0.0)) {
      throw Error(ErrorCode::kInvariant, name + ": thresholds must be positive");
    }
  }
}

ClassConfig DefaultClassConfig() {
  ClassConfig cfg;
  cfg[ObjectClass::kMav] = {{1.0, 2.0, 4.0, 8.0}, 4.0, 45.0, 0.5, 4.0, 100.0};
  cfg[ObjectClass::kEvtol] = {{1.5, 3.0, 6.0, 12.0}, 6.0, 45.0, 0.5, 6.0,
                              150.0};
  cfg[ObjectClass::kHelicopter] = {{3.0, 6.0, 12.0, 24.0}, 12.0, 45.0, 0.5,
                                   12.0, 300.0};
  return cfg;
}

std::string SerializeSequence(const Sequence& seq) {
  ValidateSequence(seq);
  std::string out;
  out += kSequenceHeader;
  out += '\n';
  out += "SEQ " + seq.sequence_id + ' ' + FormatNumber(seq.fps) + '\n';
  for (const Frame& f : seq.frames) {
    out += "FRAME " + std::to_string(f.frame_index);
    const Pose6DoF& e = f.extrinsic;
    for (double v : {f.timestamp, f.camera.fx, f.camera.fy, f.camera.cx,
                     f.camera.cy}) {
      out += ' ' + FormatNumber(v);
    }
    out += ' ' + std::to_string(f.camera.image_width) + ' ' +
           std::to_string(f.camera.image_height);
    for (double v : {e.roll(), e.pitch(), e.yaw(), e.x(), e.y(), e.z()}) {
      out += ' ' + FormatNumber(v);
    }
    out += '\n';
    for (const AnnotatedObject& o : f.objects) {
      out += "OBJ ";
      out += ClassName(o.class_id);
      out += ' ' + o.fine_class + ' ' + std::to_string(o.track_id);
      AppendBox(out, o.box);
      if (o.box2d) {
        for (double v :
             {o.box2d->u_min, o.box2d->v_min, o.box2d->u_max, o.box2d->v_max}) {
          out += ' ' + FormatNumber(v);
        }
      } else {
        out += " -";
      }
      out += '\n';
    }
  }
  return out;
}

Sequence ParseSequence(std::string_view text) {
  const std::vector<Line> lines = SplitRecords(text, kSequenceHeader, false);
  Sequence seq;
  bool saw_seq = false;
  for (const Line& line : lines) {
    const std::string_view kind = line.tokens[0];
    if (kind == "SEQ") {
      if (saw_seq) throw Error(ErrorCode::kSchema, At(line) + "second SEQ record");
      ExpectFields(line, 3);
      seq.sequence_id = std::string(line.tokens[1]);
      seq.fps = ParseDouble(line, 2);
      saw_seq = true;
    } else if (kind == "FRAME") {
      if (!saw_seq) throw Error(ErrorCode::kSchema, At(line) + "FRAME before SEQ");
      ExpectFields(line, kFrameFields);
      Frame f;
      f.frame_index = ParseInt(line, 1);
      f.timestamp = ParseDouble(line, 2);
      f.camera.fx = ParseDouble(line, 3);
      f.camera.fy = ParseDouble(line, 4);
      f.camera.cx = ParseDouble(line, 5);
      f.camera.cy = ParseDouble(line, 6);
      f.camera.image_width = static_cast<int>(ParseInt(line, 7));
      f.camera.image_height = static_cast<int>(ParseInt(line, 8));
      f.extrinsic = Pose6DoF(
          {ParseDouble(line, 12), ParseDouble(line, 13), ParseDouble(line, 14)},
          ParseDouble(line, 9), ParseDouble(line, 10), ParseDouble(line, 11));
      seq.frames.push_back(std::move(f));
    } else if (kind == "OBJ") {
      if (seq.frames.empty()) {
        throw Error(ErrorCode::kSchema, At(line) + "OBJ before any FRAME");
      }
      const size_t n = line.tokens.size();
      const bool no_box = n == kObjectFieldsNoBox && line.tokens.back() == "-";
      if (!no_box) ExpectFields(line, kObjectFieldsWithBox);
      AnnotatedObject o;
      o.class_id = ParseClassField(line, 1);
      o.fine_class = std::string(line.tokens[2]);
      o.track_id = ParseInt(line, 3);
      o.box = ParseBox(line, 4);
      if (!no_box) {
        o.box2d = Box2D{ParseDouble(line, 13), ParseDouble(line, 14),
                        ParseDouble(line, 15), ParseDouble(line, 16)};
      }
      seq.frames.back().objects.push_back(std::move(o));
    } else {
      throw Error(ErrorCode::kParse,
                  At(line) + "unknown record '" + std::string(kind) + "'");
    }
  }
  if (!saw_seq) throw Error(ErrorCode::kSchema, "missing SEQ record");
  ValidateSequence(seq);
  // 2D boxes are derived data: fill in the ones the file left out.
  for (Frame& f : seq.frames) {
    for (AnnotatedObject& o : f.objects) {
      if (o.box2d) continue;
      try {
        o.box2d = ProjectBox(f.camera, o.box);
      } catch (const Error&) {
        // Off-image; stays without a 2D box.
      }
    }
  }
  return seq;
}

std::string SerializeDetections(const DetectionSet& dets) {
  std::string out;
  out += kDetectionHeader;
  out += '\n';
  for (const auto& [frame, list] : dets.frames) {
    for (const Detection& d : list) {
      out += std::to_string(frame) + ' ';
      out += ClassName(d.class_id);
      out += ' ' + FormatNumber(d.score);
      AppendBox(out, d.box);
      out += '\n';
    }
  }
  return out;
}

DetectionSet ParseDetections(std::string_view text) {
  DetectionSet out;
  for (const Line& line : SplitRecords(text, kDetectionHeader, true)) {
    ExpectFields(line, kDetectionFields);
    Detection d;
    d.frame_index = ParseInt(line, 0);
    d.class_id = ParseClassField(line, 1);
    d.score = ParseDouble(line, 2);
    if (d.score < 0.0 || d.score > 1.0) {
      throw Error(ErrorCode::kScoreRange,
                  At(line) + "score " + std::string(line.tokens[2]) +
                      " outside [0, 1]");
    }
    d.box = ParseBox(line, 3);
    out.Add(d);
  }
  return out;
}

std::string SerializeTracks(const TrackSet& tracks) {
  ValidateTrackSet(tracks);
  std::string out;
  out += kTrackHeader;
  out += '\n';
  for (const auto& [frame, list] : tracks.frames) {
    for (const TrackedObject& t : list) {
      out += std::to_string(frame) + ' ';
      out += ClassName(t.class_id);
      out += ' ' + FormatNumber(t.score);
      AppendBox(out, t.box);
      out += ' ' + std::to_string(t.track_id) + '\n';
    }
  }
  return out;
}

TrackSet ParseTracks(std::string_view text) {
  TrackSet out;
  for (const Line& line : SplitRecords(text, kTrackHeader, true)) {
    ExpectFields(line, kTrackFields);
    TrackedObject t;
    t.frame_index = ParseInt(line, 0);
    t.class_id = ParseClassField(line, 1);
    t.score = ParseDouble(line, 2);
    if (t.score < 0.0 || t.score > 1.0) {
      throw Error(ErrorCode::kScoreRange, At(line) + "score outside [0, 1]");
    }
    t.box = ParseBox(line, 3);
    t.track_id = ParseInt(line, 12);
    out.Add(t);
  }
  ValidateTrackSet(out);
  return out;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "read failed for '" + path.string() + "'");
  return ss.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

Sequence LoadSequence(const std::filesystem::path& path) {
  return ParseSequence(ReadTextFile(path));
}

void WriteSequence(const Sequence& seq, const std::filesystem::path& path) {
  WriteTextFile(path, SerializeSequence(seq));
}

DetectionSet LoadDetections(const std::filesystem::path& path) {
  return ParseDetections(ReadTextFile(path));
}

void WriteDetections(const DetectionSet& dets,
                     const std::filesystem::path& path) {
  WriteTextFile(path, SerializeDetections(dets));
}

TrackSet LoadTracks(const std::filesystem::path& path) {
  return ParseTracks(ReadTextFile(path));
}

void WriteTracks(const TrackSet& tracks, const std::filesystem::path& path) {
  WriteTextFile(path, SerializeTracks(tracks));
}

}  // namespace laa3d
