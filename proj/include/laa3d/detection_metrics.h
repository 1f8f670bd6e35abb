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

// Detection scoring: distance-gated AP, true-positive error terms, detection
// recall and their aggregation into the Aircraft Detection Score (ADS), plus
// ADD / ADD-S pose scoring.

#ifndef LAA3D_DETECTION_METRICS_H_
#define LAA3D_DETECTION_METRICS_H_

#include <array>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "laa3d/data_model.h"
#include "laa3d/geometry.h"

namespace laa3d {

// One evaluation frame: detections and ground truth share a camera.
struct FrameSample {
  int64_t frame_index = 0;
  CameraModel camera;
  std::vector<Detection> preds;
  std::vector<AnnotatedObject> gts;
};

// Pairs a sequence with its detections frame by frame. Ground truth without
// a 2D box (off-image) is dropped. Throws kFrameRangeMismatch if detections
// reference frames the sequence does not have.
std::vector<FrameSample> MakeFrameSamples(const Sequence& seq,
                                          const DetectionSet& dets);

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
  double score = 0.0;  // score of the prediction that produced the point
};

struct PrCurve {
  std::vector<PrPoint> points;  // descending, distinct scores
  size_t num_gt = 0;
};

// Greedy center-distance matching at `threshold` meters, then cumulative
// precision/recall over predictions of `cls` sorted by descending score,
// one point per distinct score.
// Throws kEmptyGroundTruth if no ground truth of `cls` exists.
PrCurve ComputePrCurve(std::span<const FrameSample> samples, ObjectClass cls,
                       double threshold);

struct ApOptions {
  // nuScenes-style trimming: drop recall samples <= min_recall, subtract
  // min_precision and rescale.
  bool trim = false;
  double min_recall = 0.1;
  double min_precision = 0.1;
};

// 101-point interpolated AP in [0, 1].
double AveragePrecision(const PrCurve& curve, const ApOptions& options = {});

struct ClassApResult {
  std::array<double, 4> ap_per_threshold{};  // fractions
  std::array<PrCurve, 4> curves;
  double class_ap = 0.0;  // percent
};

ClassApResult ComputeClassAp(std::span<const FrameSample> samples,
                             ObjectClass cls, const ClassParams& params,
                             const ApOptions& options = {});

struct TpPair {
  Box3D pred;
  Box3D gt;
};

// True positives for the error terms: greedy by score over pairs whose
// projected 2D boxes reach IoU >= min_iou. Predictions that cannot be
// projected are skipped.
std::vector<TpPair> MatchTpImage(std::span<const FrameSample> samples,
                                 ObjectClass cls, double min_iou = 0.1);

enum class SizeErrorMode {
  kRelativePercent,  // 100 * mean |s - s'| / s'
  kAbsoluteMeters,   // mean |s - s'|
};

struct TpErrors {
  double ate = 0.0;  // meters
  double aoe = 0.0;  // degrees
  double ase = 0.0;  // percent or meters, per SizeErrorMode
  size_t n_tp = 0;
};

// With no pairs every error sits at its normalization maximum.
TpErrors ComputeTpErrors(std::span<const TpPair> pairs,
                         const ClassParams& params, SizeErrorMode mode);

// Normalization bound for ASE under the given mode.
double SizeErrorMax(const ClassParams& params, SizeErrorMode mode);

// 100 * |TP| / |GT|. Throws kEmptyGroundTruth without ground truth.
double DetectionRecall(std::span<const FrameSample> samples, ObjectClass cls,
                       double min_iou = 0.1);

// min(e / e_max, 1).
double NormalizeError(double e, double e_max);

struct ClassDetectionResult {
  std::array<double, 4> ap_per_threshold{};
  std::array<PrCurve, 4> curves;
  double class_ap = 0.0;  // percent
  double ate = 0.0;       // meters
  double aoe = 0.0;       // degrees
  double ase = 0.0;       // percent (relative mode) or meters
  double dr = 0.0;        // percent
  size_t n_tp = 0;
  size_t n_gt = 0;
};

struct AdsReport {
  std::map<ObjectClass, ClassDetectionResult> classes;
  double map = 0.0;
  double maoe = 0.0;
  double mate = 0.0;
  double mase = 0.0;
  double mdr = 0.0;
  // Class-averaged normalized errors N(mTP).
  double norm_translation = 0.0;
  double norm_rotation = 0.0;
  double norm_size = 0.0;
  double ads = 0.0;
};

// ADS = (4 mAP + 100 * sum(1 - N(mTP)) + mDR) / 8 with per-class
// normalization before the class average. Throws kEmptyGroundTruth if
// `classes` is empty.
AdsReport AggregateAds(const std::map<ObjectClass, ClassDetectionResult>& classes,
                       const ClassConfig& config, SizeErrorMode mode);

struct DetectionEvalOptions {
  ApOptions ap;
  SizeErrorMode size_mode = SizeErrorMode::kRelativePercent;
  double tp_min_iou = 0.1;
  std::vector<ObjectClass> classes{kAllClasses.begin(), kAllClasses.end()};
  int jobs = 1;
};

// Full pipeline. Classes with no ground truth are left out of the report.
AdsReport EvaluateDetections(std::span<const FrameSample> samples,
                             const ClassConfig& config,
                             const DetectionEvalOptions& options = {});

// Mean distance between model points under the two poses.
double AddError(std::span<const Eigen::Vector3d> model_points,
                const Pose6DoF& pose_pred, const Pose6DoF& pose_gt);
// Mean distance from each predicted point to its closest ground-truth point.
double AddsError(std::span<const Eigen::Vector3d> model_points,
                 const Pose6DoF& pose_pred, const Pose6DoF& pose_gt);

// Percentage of errors strictly below half the diameter.
double PoseAccuracyAtHalfDiameter(std::span<const double> errors,
                                  double diameter);
// Per-instance diameters.
double PoseAccuracyAtHalfDiameter(std::span<const double> errors,
                                  std::span<const double> diameters);

}  // namespace laa3d

#endif  // LAA3D_DETECTION_METRICS_H_
