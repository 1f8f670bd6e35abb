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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <string>

#include "laa3d/error.h"

namespace laa3d {
namespace {

enum Stream : uint64_t {
  kStreamSwitch = 1,
  kStreamDrop = 2,
  kStreamJitter = 3,
  kStreamScore = 4,
  kStreamFpCount = 5,
  kStreamFp = 6,
  kStreamLane = 7,
};

constexpr int kFpAttempts = 16;

uint64_t Mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Rotation taking the object's forward axis (+x) onto `direction`.
Eigen::Matrix3d AlignedRotation(const Eigen::Vector3d& direction) {
  if (direction.norm() == 0.0) return Eigen::Matrix3d::Identity();
  const double yaw = std::atan2(direction.y(), direction.x());
  const double pitch =
      std::atan2(-direction.z(), std::hypot(direction.x(), direction.y()));
  return RotationFromEuler(0.0, pitch, yaw);
}

std::array<double, 3> DefaultSize(ObjectClass c) {
  switch (c) {
    case ObjectClass::kMav: return {0.6, 0.6, 0.3};
    case ObjectClass::kEvtol: return {6.0, 6.0, 2.0};
    case ObjectClass::kHelicopter: return {12.0, 3.0, 4.0};
  }
  return {1.0, 1.0, 1.0};
}

// --- scenario text format ---------------------------------------------

struct Cursor {
  size_t line = 0;
  std::vector<std::string_view> tokens;
  size_t pos = 1;

  std::string At() const { return "line " + std::to_string(line) + ": "; }

  std::string_view Next() {
    if (pos >= tokens.size()) {
      throw Error(ErrorCode::kSchema, At() + "missing field after '" +
                                          std::string(tokens[pos - 1]) + "'");
    }
    return tokens[pos++];
  }

  double Number() {
    const std::string_view tok = Next();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::kParse, At() + "bad number '" + std::string(tok) + "'");
    }
    return v;
  }

  template <typename Int>
  Int Integer() {
    const std::string_view tok = Next();
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw Error(ErrorCode::kParse, At() + "bad integer '" + std::string(tok) + "'");
    }
    return v;
  }

  Eigen::Vector3d Vec3() {
    const double x = Number(), y = Number(), z = Number();
    return {x, y, z};
  }

  void End() const {
    if (pos != tokens.size()) {
      throw Error(ErrorCode::kSchema, At() + "unexpected extra fields");
    }
  }
};

std::vector<std::string_view> SplitWs(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    if (i >= s.size()) break;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string Num(double v) { return FormatNumber(v); }

}  // namespace

uint64_t CounterRng::Bits(uint64_t stream, uint64_t frame, uint64_t slot,
                          uint64_t k) const {
  uint64_t h = Mix(seed_ + 0x9E3779B97F4A7C15ULL * (stream + 1));
  h = Mix(h ^ (frame * 0xD6E8FEB86659FD93ULL));
  h = Mix(h ^ (slot * 0xA0761D6478BD642FULL));
  h = Mix(h ^ (k * 0xE7037ED1A0B428DBULL));
  return h;
}

double CounterRng::Uniform(uint64_t stream, uint64_t frame, uint64_t slot,
                           uint64_t k) const {
  return double(Bits(stream, frame, slot, k) >> 11) * 0x1.0p-53;
}

double CounterRng::Gaussian(uint64_t stream, uint64_t frame, uint64_t slot,
                            uint64_t k) const {
  const double u1 = 1.0 - Uniform(stream, frame, slot, k);  // (0, 1]
  const double u2 = Uniform(stream, frame, slot, k + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

int CounterRng::Poisson(double lambda, uint64_t stream, uint64_t frame,
                        uint64_t slot) const {
  if (!(lambda > 0.0)) return 0;
  const double limit = std::exp(-lambda);
  double p = 1.0;
  int n = 0;
  while (true) {
    p *= Uniform(stream, frame, slot, uint64_t(n));
    if (p <= limit) return n;
    ++n;
  }
}

std::vector<TrajectorySample> MakeTrajectory(const TrajectorySpec& spec,
                                             std::span<const double> times) {
  if (spec.kind == TrajectoryKind::kCircular && !(spec.radius > 0.0)) {
    throw Error(ErrorCode::kDegenerateSpec, "circular radius must be positive");
  }
  if (spec.kind == TrajectoryKind::kWaypoint) {
    if (spec.waypoints.empty()) {
      throw Error(ErrorCode::kDegenerateSpec, "waypoint list is empty");
    }
    for (size_t i = 1; i < spec.waypoints.size(); ++i) {
      if (!(spec.waypoints[i].t > spec.waypoints[i - 1].t)) {
        throw Error(ErrorCode::kDegenerateSpec,
                    "waypoint times must be strictly increasing");
      }
    }
  }
  const Eigen::Matrix3d fixed =
      RotationFromEuler(spec.roll, spec.pitch, spec.yaw);

  std::vector<TrajectorySample> out;
  out.reserve(times.size());
  for (double t : times) {
    TrajectorySample s;
    switch (spec.kind) {
      case TrajectoryKind::kLinear:
        s.position = spec.start + spec.velocity * t;
        s.velocity = spec.velocity;
        break;
      case TrajectoryKind::kCircular: {
        const double a = spec.angular_rate * t + spec.phase;
        s.position = spec.center +
                     spec.radius * Eigen::Vector3d(std::cos(a), 0.0, std::sin(a));
        s.velocity = spec.radius * spec.angular_rate *
                     Eigen::Vector3d(-std::sin(a), 0.0, std::cos(a));
        break;
      }
      case TrajectoryKind::kWaypoint: {
        const auto& w = spec.waypoints;
        if (w.size() == 1 || t <= w.front().t) {
          s.position = w.front().position;
        } else if (t >= w.back().t) {
          s.position = w.back().position;
        } else {
          // Segment containing t; at an exact waypoint the next segment.
          size_t i = 0;
          while (i + 1 < w.size() && !(t < w[i + 1].t)) ++i;
          const double span = w[i + 1].t - w[i].t;
          const double f = (t - w[i].t) / span;
          s.position = w[i].position + f * (w[i + 1].position - w[i].position);
          s.velocity = (w[i + 1].position - w[i].position) / span;
        }
        break;
      }
    }
    s.rotation = spec.orientation == OrientationRule::kFixed
                     ? fixed
                     : AlignedRotation(s.velocity);
    out.push_back(s);
  }
  return out;
}

void CorruptionModel::Validate() const {
  auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw Error(ErrorCode::kInvariant, "sigma must be non-negative");
  }
  if (!rate(fn_rate) || !rate(idswitch_rate) || !rate(fp_rate)) {
    throw Error(ErrorCode::kInvariant, "corruption rates must lie in [0, 1]");
  }
  if (!(tp_score_lo >= 0.0 && tp_score_lo <= tp_score_hi && tp_score_hi <= 1.0) ||
      !(fp_score_lo >= 0.0 && fp_score_lo <= fp_score_hi && fp_score_hi <= 1.0)) {
    throw Error(ErrorCode::kInvariant, "score ranges must lie in [0, 1]");
  }
}

Sequence SimulateSequence(const ScenarioSpec& spec, SimulationLog* log) {
  if (spec.duration <= 0) {
    throw Error(ErrorCode::kDegenerateSpec, "duration must be positive");
  }
  if (!(spec.fps > 0.0)) throw Error(ErrorCode::kDegenerateSpec, "fps must be positive");
  spec.camera.Validate();

  std::vector<double> times(spec.duration);
  for (int k = 0; k < spec.duration; ++k) times[k] = k / spec.fps;

  std::vector<std::vector<TrajectorySample>> paths;
  for (const ObjectSpec& o : spec.objects) {
    paths.push_back(MakeTrajectory(o.trajectory, times));
  }

  const Eigen::Matrix3d cam_rot = spec.extrinsic.rotation();
  Sequence seq;
  seq.sequence_id = spec.sequence_id;
  seq.fps = spec.fps;
  for (int k = 0; k < spec.duration; ++k) {
    Frame f;
    f.frame_index = k;
    f.timestamp = times[k];
    f.camera = spec.camera;
    f.extrinsic = spec.extrinsic;
    for (size_t i = 0; i < spec.objects.size(); ++i) {
      const ObjectSpec& o = spec.objects[i];
      const TrajectorySample& s = paths[i][k];
      const Pose6DoF pose = Pose6DoF::FromRotation(spec.extrinsic.Transform(s.position),
                                                   cam_rot * s.rotation);
      AnnotatedObject obj;
      obj.class_id = o.class_id;
      obj.fine_class = o.fine_class;
      obj.track_id = int64_t(i);
      obj.box = Box3D(pose, o.length, o.width, o.height);
      try {
        obj.box2d = ProjectBox(f.camera, obj.box);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kBehindCamera && e.code() != ErrorCode::kFullyOutside) {
          throw;
        }
        if (log) log->dropped.emplace_back(k, obj.track_id);
        continue;
      }
      f.objects.push_back(std::move(obj));
    }
    seq.frames.push_back(std::move(f));
  }
  ValidateSequence(seq);
  return seq;
}

CorruptionOutput CorruptDetections(const Sequence& seq,
                                   const CorruptionModel& model,
                                   const ClassConfig& config) {
  model.Validate();
  const CounterRng rng(model.seed);
  CorruptionOutput out;
  std::map<int64_t, int64_t> emitted_id;  // gt track id -> emitted id
  int64_t next_fp_id = kFalsePositiveIdBase;

  for (const Frame& f : seq.frames) {
    const uint64_t fk = uint64_t(f.frame_index);
    std::vector<const AnnotatedObject*> objs;
    for (const AnnotatedObject& o : f.objects) {
      objs.push_back(&o);
      emitted_id.emplace(o.track_id, o.track_id);
    }
    std::sort(objs.begin(), objs.end(), [](const auto* a, const auto* b) {
      return a->track_id < b->track_id;
    });

    // Identity switches between concurrently visible tracks of one class.
    if (model.idswitch_rate > 0.0) {
      std::vector<char> swapped(objs.size(), 0);
      for (size_t i = 0; i < objs.size(); ++i) {
        if (swapped[i]) continue;
        const uint64_t slot = uint64_t(objs[i]->track_id);
        if (!(rng.Uniform(kStreamSwitch, fk, slot, 0) < model.idswitch_rate)) continue;
        std::vector<size_t> partners;
        for (size_t j = 0; j < objs.size(); ++j) {
          if (j != i && !swapped[j] && objs[j]->class_id == objs[i]->class_id) {
            partners.push_back(j);
          }
        }
        if (partners.empty()) continue;
        const size_t pick = partners[std::min(
            partners.size() - 1,
            size_t(rng.Uniform(kStreamSwitch, fk, slot, 1) * partners.size()))];
        std::swap(emitted_id[objs[i]->track_id], emitted_id[objs[pick]->track_id]);
        swapped[i] = swapped[pick] = 1;
        out.ledger.switches.push_back(
            {f.frame_index, objs[i]->track_id, objs[pick]->track_id});
      }
    }

    for (const AnnotatedObject* o : objs) {
      const uint64_t slot = uint64_t(o->track_id);
      if (model.fn_rate > 0.0 && rng.Uniform(kStreamDrop, fk, slot, 0) < model.fn_rate) {
        out.ledger.drops.push_back({f.frame_index, o->track_id});
        continue;
      }
      Eigen::Vector3d p = o->box.pose().position();
      if (model.sigma > 0.0) {
        for (int axis = 0; axis < 3; ++axis) {
          p[axis] += model.sigma * rng.Gaussian(kStreamJitter, fk, slot, 2 * axis);
        }
      }
      const Pose6DoF& gp = o->box.pose();
      const Box3D box = o->box.WithPose(Pose6DoF(p, gp.roll(), gp.pitch(), gp.yaw()));
      const double score =
          model.tp_score_lo + (model.tp_score_hi - model.tp_score_lo) *
                                  rng.Uniform(kStreamScore, fk, slot, 0);
      out.detections.Add({f.frame_index, o->class_id, score, box});
      out.tracks.Add({f.frame_index, emitted_id[o->track_id], o->class_id, score, box});
    }

    const int n_fp = rng.Poisson(model.fp_rate, kStreamFpCount, fk, 0);
    for (int j = 0; j < n_fp; ++j) {
      const uint64_t slot = uint64_t(j);
      const auto cls = kAllClasses[std::min<size_t>(
          2, size_t(rng.Uniform(kStreamFp, fk, slot, 0) * 3.0))];
      const ClassParams& params = config[cls];
      const double keep_out = 2.0 * params.mot_threshold;
      for (int attempt = 0; attempt < kFpAttempts; ++attempt) {
        const uint64_t k = 1 + 4 * uint64_t(attempt);
        const double z = 1.0 + (params.depth_range - 1.0) * rng.Uniform(kStreamFp, fk, slot, k);
        const double u = f.camera.image_width * rng.Uniform(kStreamFp, fk, slot, k + 1);
        const double v = f.camera.image_height * rng.Uniform(kStreamFp, fk, slot, k + 2);
        const Eigen::Vector3d p((u - f.camera.cx) * z / f.camera.fx,
                                (v - f.camera.cy) * z / f.camera.fy, z);
        const bool clear = std::none_of(objs.begin(), objs.end(), [&](const auto* o) {
          return o->class_id == cls &&
                 (o->box.pose().position() - p).norm() <= keep_out;
        });
        if (!clear) continue;
        const double yaw = 2.0 * kPi * rng.Uniform(kStreamFp, fk, slot, k + 3) - kPi;
        const auto size = DefaultSize(cls);
        const Box3D box(Pose6DoF(p, 0.0, 0.0, yaw), size[0], size[1], size[2]);
        const double score =
            model.fp_score_lo + (model.fp_score_hi - model.fp_score_lo) *
                                    rng.Uniform(kStreamScore, fk, 1000000 + slot, 0);
        const int64_t id = next_fp_id++;
        out.detections.Add({f.frame_index, cls, score, box});
        out.tracks.Add({f.frame_index, id, cls, score, box});
        out.ledger.false_positives.push_back({f.frame_index, cls, id, p});
        break;
      }
    }
  }
  return out;
}

ScenarioSpec ParseScenario(std::string_view text) {
  ScenarioSpec spec;
  bool saw_header = false;
  size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    const auto tokens = SplitWs(text.substr(pos, end - pos));
    pos = end + 1;
    if (!tokens.empty() && tokens[0].front() != '#') {
      Cursor c{number, tokens};
      const std::string_view key = tokens[0];
      if (!saw_header) {
        if (tokens.size() != 2 || key != "LAA3D-SCENARIO" || tokens[1] != "v1") {
          throw Error(ErrorCode::kParse, c.At() + "expected header 'LAA3D-SCENARIO v1'");
        }
        saw_header = true;
        c.pos = tokens.size();
      } else if (key == "sequence") {
        spec.sequence_id = std::string(c.Next());
      } else if (key == "seed") {
        spec.seed = c.Integer<uint64_t>();
      } else if (key == "frames") {
        spec.duration = c.Integer<int>();
      } else if (key == "fps") {
        spec.fps = c.Number();
      } else if (key == "camera") {
        spec.camera.fx = c.Number();
        spec.camera.fy = c.Number();
        spec.camera.cx = c.Number();
        spec.camera.cy = c.Number();
        spec.camera.image_width = c.Integer<int>();
        spec.camera.image_height = c.Integer<int>();
      } else if (key == "extrinsic") {
        const double r = c.Number(), p = c.Number(), y = c.Number();
        spec.extrinsic = Pose6DoF(c.Vec3(), r, p, y);
      } else if (key == "object") {
        ObjectSpec o;
        const std::string_view cls = c.Next();
        const auto parsed = ParseClassName(cls);
        if (!parsed) {
          throw Error(ErrorCode::kParse, c.At() + "unknown class '" + std::string(cls) + "'");
        }
        o.class_id = *parsed;
        o.fine_class = std::string(c.Next());
        o.length = c.Number();
        o.width = c.Number();
        o.height = c.Number();
        if (!(o.length > 0.0 && o.width > 0.0 && o.height > 0.0)) {
          throw Error(ErrorCode::kDegenerateSpec, c.At() + "object size must be positive");
        }
        TrajectorySpec& t = o.trajectory;
        const std::string_view kind = c.Next();
        if (kind == "linear") {
          t.kind = TrajectoryKind::kLinear;
          t.start = c.Vec3();
          t.velocity = c.Vec3();
        } else if (kind == "circular") {
          t.kind = TrajectoryKind::kCircular;
          t.center = c.Vec3();
          t.radius = c.Number();
          t.angular_rate = c.Number();
          t.phase = c.Number();
          if (!(t.radius > 0.0)) {
            throw Error(ErrorCode::kDegenerateSpec, c.At() + "radius must be positive");
          }
        } else if (kind == "waypoint") {
          t.kind = TrajectoryKind::kWaypoint;
          const int n = c.Integer<int>();
          if (n <= 0) {
            throw Error(ErrorCode::kDegenerateSpec, c.At() + "waypoint list is empty");
          }
          for (int i = 0; i < n; ++i) {
            Waypoint w;
            w.t = c.Number();
            w.position = c.Vec3();
            t.waypoints.push_back(w);
          }
        } else {
          throw Error(ErrorCode::kParse,
                      c.At() + "unknown trajectory kind '" + std::string(kind) + "'");
        }
        const std::string_view orient = c.Next();
        if (orient == "aligned") {
          t.orientation = OrientationRule::kVelocityAligned;
        } else if (orient == "fixed") {
          t.orientation = OrientationRule::kFixed;
          t.roll = c.Number();
          t.pitch = c.Number();
          t.yaw = c.Number();
        } else {
          throw Error(ErrorCode::kParse,
                      c.At() + "unknown orientation rule '" + std::string(orient) + "'");
        }
        spec.objects.push_back(std::move(o));
      } else if (key == "corruption") {
        CorruptionModel m;
        m.sigma = c.Number();
        m.fp_rate = c.Number();
        m.fn_rate = c.Number();
        m.idswitch_rate = c.Number();
        m.seed = c.Integer<uint64_t>();
        try {
          m.Validate();
        } catch (const Error& e) {
          throw Error(ErrorCode::kDegenerateSpec, c.At() + e.what());
        }
        spec.corruption = m;
      } else {
        throw Error(ErrorCode::kParse, c.At() + "unknown key '" + std::string(key) + "'");
      }
      c.End();
    }
    if (end == text.size()) break;
  }
  if (!saw_header) throw Error(ErrorCode::kParse, "missing header 'LAA3D-SCENARIO v1'");
  if (spec.duration <= 0) throw Error(ErrorCode::kDegenerateSpec, "frames must be positive");
  if (!(spec.fps > 0.0)) throw Error(ErrorCode::kDegenerateSpec, "fps must be positive");
  try {
    spec.camera.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kDegenerateSpec, e.what());
  }
  return spec;
}

ScenarioSpec LoadScenario(const std::filesystem::path& path) {
  return ParseScenario(ReadTextFile(path));
}

std::string SerializeScenario(const ScenarioSpec& spec) {
  std::string out = "LAA3D-SCENARIO v1\n";
  out += "sequence " + spec.sequence_id + "\n";
  out += "seed " + std::to_string(spec.seed) + "\n";
  out += "frames " + std::to_string(spec.duration) + "\n";
  out += "fps " + Num(spec.fps) + "\n";
  const CameraModel& cam = spec.camera;
  out += "camera " + Num(cam.fx) + ' ' + Num(cam.fy) + ' ' + Num(cam.cx) + ' ' +
         Num(cam.cy) + ' ' + std::to_string(cam.image_width) + ' ' +
         std::to_string(cam.image_height) + "\n";
  const Pose6DoF& e = spec.extrinsic;
  out += "extrinsic " + Num(e.roll()) + ' ' + Num(e.pitch()) + ' ' + Num(e.yaw()) +
         ' ' + Num(e.x()) + ' ' + Num(e.y()) + ' ' + Num(e.z()) + "\n";
  auto vec = [](const Eigen::Vector3d& v) {
    return Num(v.x()) + ' ' + Num(v.y()) + ' ' + Num(v.z());
  };
  for (const ObjectSpec& o : spec.objects) {
    const TrajectorySpec& t = o.trajectory;
    out += "object " + std::string(ClassName(o.class_id)) + ' ' + o.fine_class + ' ' +
           Num(o.length) + ' ' + Num(o.width) + ' ' + Num(o.height) + ' ';
    switch (t.kind) {
      case TrajectoryKind::kLinear:
        out += "linear " + vec(t.start) + ' ' + vec(t.velocity);
        break;
      case TrajectoryKind::kCircular:
        out += "circular " + vec(t.center) + ' ' + Num(t.radius) + ' ' +
               Num(t.angular_rate) + ' ' + Num(t.phase);
        break;
      case TrajectoryKind::kWaypoint:
        out += "waypoint " + std::to_string(t.waypoints.size());
        for (const Waypoint& w : t.waypoints) out += ' ' + Num(w.t) + ' ' + vec(w.position);
        break;
    }
    if (t.orientation == OrientationRule::kFixed) {
      out += " fixed " + Num(t.roll) + ' ' + Num(t.pitch) + ' ' + Num(t.yaw);
    } else {
      out += " aligned";
    }
    out += "\n";
  }
  if (spec.corruption) {
    const CorruptionModel& m = *spec.corruption;
    out += "corruption " + Num(m.sigma) + ' ' + Num(m.fp_rate) + ' ' + Num(m.fn_rate) +
           ' ' + Num(m.idswitch_rate) + ' ' + std::to_string(m.seed) + "\n";
  }
  return out;
}

ScenarioSpec LaneScenario(int num_objects, int duration, double spacing,
                          uint64_t seed) {
  ScenarioSpec spec;
  spec.sequence_id = "lanes";
  spec.seed = seed;
  spec.duration = duration;
  spec.fps = 10.0;
  const CounterRng rng(seed);
  const int cols = 5;
  const int rows = (num_objects + cols - 1) / cols;
  const double x_max = 0.5 * (cols - 1) * spacing;
  const double y_max = 0.5 * (std::max(rows, 1) - 1) * spacing;
  const double aspect = spec.camera.cy / spec.camera.fy;
  const double z0 = 40.0 + 2.2 * std::max(x_max, y_max / aspect);
  for (int i = 0; i < num_objects; ++i) {
    ObjectSpec o;
    o.class_id = kAllClasses[i % 3];
    o.fine_class = std::string(ClassName(o.class_id)) + "-lane";
    const auto size = DefaultSize(o.class_id);
    o.length = size[0];
    o.width = size[1];
    o.height = size[2];
    const int col = i % cols, row = i / cols;
    const double speed = 0.5 + rng.Uniform(kStreamLane, 0, uint64_t(i), 0);
    const double dir = rng.Uniform(kStreamLane, 0, uint64_t(i), 1) < 0.5 ? -1.0 : 1.0;
    o.trajectory.kind = TrajectoryKind::kLinear;
    o.trajectory.start = {col * spacing - x_max, row * spacing - y_max, z0};
    o.trajectory.velocity = {0.0, 0.0, dir * speed};
    spec.objects.push_back(o);
  }
  return spec;
}

}  // namespace laa3d
