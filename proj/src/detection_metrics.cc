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

#include "laa3d/detection_metrics.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "laa3d/assignment.h"
#include "laa3d/error.h"

namespace laa3d {
namespace {

constexpr int kRecallSamples = 101;

struct ScoredFlag {
  double score;
  bool tp;
};

size_t CountGt(std::span<const FrameSample> samples, ObjectClass cls) {
  size_t n = 0;
  for (const FrameSample& s : samples) {
    for (const AnnotatedObject& g : s.gts) n += g.class_id == cls;
  }
  return n;
}

void RequireGt(std::span<const FrameSample> samples, ObjectClass cls) {
  if (CountGt(samples, cls) == 0) {
    throw Error(ErrorCode::kEmptyGroundTruth,
                "no ground truth for class " + std::string(ClassName(cls)));
  }
}

template <typename T, typename Pred>
std::vector<const T*> Filter(const std::vector<T>& items, Pred keep) {
  std::vector<const T*> out;
  for (const T& item : items) {
    if (keep(item)) out.push_back(&item);
  }
  return out;
}

}  // namespace

std::vector<FrameSample> MakeFrameSamples(const Sequence& seq,
                                          const DetectionSet& dets) {
  std::vector<FrameSample> samples;
  std::set<int64_t> known;
  for (const Frame& f : seq.frames) {
    known.insert(f.frame_index);
    FrameSample s;
    s.frame_index = f.frame_index;
    s.camera = f.camera;
    for (const AnnotatedObject& o : f.objects) {
      if (o.box2d) s.gts.push_back(o);
    }
    if (auto it = dets.frames.find(f.frame_index); it != dets.frames.end()) {
      s.preds = it->second;
    }
    samples.push_back(std::move(s));
  }
  for (const auto& [frame, list] : dets.frames) {
    if (!list.empty() && !known.count(frame)) {
      throw Error(ErrorCode::kFrameRangeMismatch,
                  "detections reference frame " + std::to_string(frame) +
                      " absent from sequence '" + seq.sequence_id + "'");
    }
  }
  return samples;
}

PrCurve ComputePrCurve(std::span<const FrameSample> samples, ObjectClass cls,
                       double threshold) {
  RequireGt(samples, cls);
  PrCurve curve;
  curve.num_gt = CountGt(samples, cls);

  std::vector<ScoredFlag> flags;
  for (const FrameSample& s : samples) {
    const auto preds =
        Filter(s.preds, [cls](const Detection& d) { return d.class_id == cls; });
    const auto gts = Filter(
        s.gts, [cls](const AnnotatedObject& g) { return g.class_id == cls; });
    std::vector<double> scores;
    for (const Detection* d : preds) scores.push_back(d->score);
    const Matching m = GreedyMatch(
        scores, gts.size(),
        [&](size_t p, size_t g) {
          return CenterDistance(preds[p]->box.pose(), gts[g]->box.pose());
        },
        threshold);
    std::vector<char> is_tp(preds.size(), 0);
    for (const auto& [p, g] : m.pairs) is_tp[p] = 1;
    for (size_t p = 0; p < preds.size(); ++p) {
      flags.push_back({preds[p]->score, is_tp[p] != 0});
    }
  }
  std::stable_sort(flags.begin(), flags.end(),
                   [](const ScoredFlag& a, const ScoredFlag& b) {
                     return a.score > b.score;
                   });

  // One operating point per distinct score: tied predictions enter together.
  size_t tp = 0;
  for (size_t i = 0; i < flags.size(); ++i) {
    tp += flags[i].tp;
    if (i + 1 < flags.size() && flags[i + 1].score == flags[i].score) continue;
    curve.points.push_back({double(tp) / double(curve.num_gt),
                            double(tp) / double(i + 1), flags[i].score});
  }
  return curve;
}

double AveragePrecision(const PrCurve& curve, const ApOptions& options) {
  const auto& pts = curve.points;
  // Running maximum of precision from the end: interpolated precision.
  std::vector<double> suffix_max(pts.size() + 1, 0.0);
  for (size_t i = pts.size(); i-- > 0;) {
    suffix_max[i] = std::max(suffix_max[i + 1], pts[i].precision);
  }
  std::array<double, kRecallSamples> interp{};
  size_t idx = 0;
  for (int i = 0; i < kRecallSamples; ++i) {
    const double r = i / 100.0;
    while (idx < pts.size() && pts[idx].recall < r - 1e-12) ++idx;
    interp[i] = suffix_max[idx];
  }
  if (!options.trim) {
    return std::accumulate(interp.begin(), interp.end(), 0.0) / kRecallSamples;
  }
  const int first = static_cast<int>(std::lround(100.0 * options.min_recall)) + 1;
  double sum = 0.0;
  int count = 0;
  for (int i = first; i < kRecallSamples; ++i, ++count) {
    sum += std::max(0.0, interp[i] - options.min_precision);
  }
  if (count == 0) return 0.0;
  return sum / count / (1.0 - options.min_precision);
}

ClassApResult ComputeClassAp(std::span<const FrameSample> samples,
                             ObjectClass cls, const ClassParams& params,
                             const ApOptions& options) {
  ClassApResult out;
  double total = 0.0;
  for (size_t i = 0; i < params.ap_thresholds.size(); ++i) {
    out.curves[i] = ComputePrCurve(samples, cls, params.ap_thresholds[i]);
    out.ap_per_threshold[i] = AveragePrecision(out.curves[i], options);
    total += out.ap_per_threshold[i];
  }
  out.class_ap = 100.0 * total / double(params.ap_thresholds.size());
  return out;
}

std::vector<TpPair> MatchTpImage(std::span<const FrameSample> samples,
                                 ObjectClass cls, double min_iou) {
  std::vector<TpPair> pairs;
  for (const FrameSample& s : samples) {
    std::vector<const Detection*> preds;
    std::vector<Box2D> pred_boxes;
    for (const Detection& d : s.preds) {
      if (d.class_id != cls) continue;
      try {
        pred_boxes.push_back(ProjectBox(s.camera, d.box));
        preds.push_back(&d);
      } catch (const Error&) {
        // Not projectable: cannot be an image-plane true positive.
      }
    }
    const auto gts = Filter(s.gts, [cls](const AnnotatedObject& g) {
      return g.class_id == cls && g.box2d.has_value();
    });
    std::vector<double> scores;
    for (const Detection* d : preds) scores.push_back(d->score);
    // Negated IoU as the distance; the gate is -min_iou.
    const Matching m = GreedyMatch(
        scores, gts.size(),
        [&](size_t p, size_t g) { return -Iou2d(pred_boxes[p], *gts[g]->box2d); },
        -min_iou);
    for (const auto& [p, g] : m.pairs) pairs.push_back({preds[p]->box, gts[g]->box});
  }
  return pairs;
}

double SizeErrorMax(const ClassParams& params, SizeErrorMode mode) {
  return mode == SizeErrorMode::kRelativePercent ? 100.0 * params.tp_max_size
                                                 : params.tp_max_size;
}

TpErrors ComputeTpErrors(std::span<const TpPair> pairs,
                         const ClassParams& params, SizeErrorMode mode) {
  TpErrors e;
  e.n_tp = pairs.size();
  if (pairs.empty()) {
    e.ate = params.tp_max_translation;
    e.aoe = params.tp_max_rotation;
    e.ase = SizeErrorMax(params, mode);
    return e;
  }
  for (const TpPair& pair : pairs) {
    e.ate += CenterDistance(pair.pred.pose(), pair.gt.pose());
    const auto a = pair.pred.pose().angles();
    const auto b = pair.gt.pose().angles();
    double rot = 0.0;
    for (int i = 0; i < 3; ++i) rot += MinimalAngleDiff(a[i], b[i]);
    e.aoe += RadToDeg(rot / 3.0);
    const auto s = pair.pred.size();
    const auto g = pair.gt.size();
    double size = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double diff = std::abs(s[i] - g[i]);
      size += mode == SizeErrorMode::kRelativePercent ? diff / g[i] : diff;
    }
    e.ase += size / 3.0;
  }
  const double n = double(pairs.size());
  e.ate /= n;
  e.aoe /= n;
  e.ase /= n;
  if (mode == SizeErrorMode::kRelativePercent) e.ase *= 100.0;
  return e;
}

double DetectionRecall(std::span<const FrameSample> samples, ObjectClass cls,
                       double min_iou) {
  RequireGt(samples, cls);
  const size_t n_tp = MatchTpImage(samples, cls, min_iou).size();
  return 100.0 * double(n_tp) / double(CountGt(samples, cls));
}

double NormalizeError(double e, double e_max) {
  return std::min(std::max(e, 0.0) / e_max, 1.0);
}

AdsReport AggregateAds(const std::map<ObjectClass, ClassDetectionResult>& classes,
                       const ClassConfig& config, SizeErrorMode mode) {
  if (classes.empty()) {
    throw Error(ErrorCode::kEmptyGroundTruth, "no class to aggregate");
  }
  AdsReport r;
  r.classes = classes;
  for (const auto& [cls, c] : classes) {
    const ClassParams& p = config[cls];
    r.map += c.class_ap;
    r.maoe += c.aoe;
    r.mate += c.ate;
    r.mase += c.ase;
    r.mdr += c.dr;
    r.norm_translation += NormalizeError(c.ate, p.tp_max_translation);
    r.norm_rotation += NormalizeError(c.aoe, p.tp_max_rotation);
    r.norm_size += NormalizeError(c.ase, SizeErrorMax(p, mode));
  }
  const double n = double(classes.size());
  for (double* v : {&r.map, &r.maoe, &r.mate, &r.mase, &r.mdr,
                    &r.norm_translation, &r.norm_rotation, &r.norm_size}) {
    *v /= n;
  }
  const double tp_term = (1.0 - r.norm_translation) + (1.0 - r.norm_rotation) +
                         (1.0 - r.norm_size);
  r.ads = (4.0 * r.map + 100.0 * tp_term + r.mdr) / 8.0;
  return r;
}

AdsReport EvaluateDetections(std::span<const FrameSample> samples,
                             const ClassConfig& config,
                             const DetectionEvalOptions& options) {
  auto evaluate_class = [&](ObjectClass cls) {
    ClassDetectionResult c;
    const ClassParams& p = config[cls];
    const ClassApResult ap = ComputeClassAp(samples, cls, p, options.ap);
    c.ap_per_threshold = ap.ap_per_threshold;
    c.curves = ap.curves;
    c.class_ap = ap.class_ap;
    const std::vector<TpPair> tps = MatchTpImage(samples, cls, options.tp_min_iou);
    const TpErrors e = ComputeTpErrors(tps, p, options.size_mode);
    c.ate = e.ate;
    c.aoe = e.aoe;
    c.ase = e.ase;
    c.n_tp = e.n_tp;
    c.n_gt = CountGt(samples, cls);
    c.dr = 100.0 * double(c.n_tp) / double(c.n_gt);
    return c;
  };

  std::vector<ObjectClass> present;
  for (ObjectClass cls : options.classes) {
    if (CountGt(samples, cls) > 0) present.push_back(cls);
  }
  if (present.empty()) {
    throw Error(ErrorCode::kEmptyGroundTruth,
                "no ground truth for any evaluated class");
  }

  std::map<ObjectClass, ClassDetectionResult> results;
  if (options.jobs > 1) {
    std::vector<std::future<ClassDetectionResult>> futures;
    for (ObjectClass cls : present) {
      futures.push_back(std::async(std::launch::async, evaluate_class, cls));
    }
    for (size_t i = 0; i < present.size(); ++i) {
      results[present[i]] = futures[i].get();
    }
  } else {
    for (ObjectClass cls : present) results[cls] = evaluate_class(cls);
  }
  return AggregateAds(results, config, options.size_mode);
}

double AddError(std::span<const Eigen::Vector3d> model_points,
                const Pose6DoF& pose_pred, const Pose6DoF& pose_gt) {
  if (model_points.empty()) {
    throw Error(ErrorCode::kInvariant, "ADD needs at least one model point");
  }
  double total = 0.0;
  for (const Eigen::Vector3d& p : model_points) {
    total += (pose_pred.Transform(p) - pose_gt.Transform(p)).norm();
  }
  return total / double(model_points.size());
}

double AddsError(std::span<const Eigen::Vector3d> model_points,
                 const Pose6DoF& pose_pred, const Pose6DoF& pose_gt) {
  if (model_points.empty()) {
    throw Error(ErrorCode::kInvariant, "ADD-S needs at least one model point");
  }
  std::vector<Eigen::Vector3d> gt_points;
  gt_points.reserve(model_points.size());
  for (const Eigen::Vector3d& p : model_points) {
    gt_points.push_back(pose_gt.Transform(p));
  }
  double total = 0.0;
  for (const Eigen::Vector3d& p : model_points) {
    const Eigen::Vector3d q = pose_pred.Transform(p);
    double best = std::numeric_limits<double>::infinity();
    for (const Eigen::Vector3d& g : gt_points) best = std::min(best, (q - g).norm());
    total += best;
  }
  return total / double(model_points.size());
}

double PoseAccuracyAtHalfDiameter(std::span<const double> errors,
                                  double diameter) {
  if (!(diameter > 0.0)) {
    throw Error(ErrorCode::kInvariant, "diameter must be positive");
  }
  if (errors.empty()) return 0.0;
  const auto hits = std::count_if(errors.begin(), errors.end(),
                                  [&](double e) { return e < 0.5 * diameter; });
  return 100.0 * double(hits) / double(errors.size());
}

double PoseAccuracyAtHalfDiameter(std::span<const double> errors,
                                  std::span<const double> diameters) {
  if (errors.size() != diameters.size()) {
    throw Error(ErrorCode::kLengthMismatch, "errors and diameters differ in size");
  }
  if (errors.empty()) return 0.0;
  size_t hits = 0;
  for (size_t i = 0; i < errors.size(); ++i) {
    if (!(diameters[i] > 0.0)) {
      throw Error(ErrorCode::kInvariant, "diameter must be positive");
    }
    hits += errors[i] < 0.5 * diameters[i];
  }
  return 100.0 * double(hits) / double(errors.size());
}

}  // namespace laa3d
