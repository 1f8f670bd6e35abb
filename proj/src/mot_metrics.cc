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

#include "laa3d/mot_metrics.h"

#include <algorithm>
#include <set>
#include <string>

#include "laa3d/assignment.h"
#include "laa3d/error.h"

namespace laa3d {
namespace {

double Dist(const MotObject& a, const MotObject& b) {
  return (a.position - b.position).norm();
}

std::map<int64_t, size_t> IndexById(const std::vector<MotObject>& objs) {
  std::map<int64_t, size_t> out;
  for (size_t i = 0; i < objs.size(); ++i) out[objs[i].id] = i;
  return out;
}

}  // namespace

std::vector<MotFrame> BuildMotFrames(const Sequence& seq, const TrackSet& tracks,
                                     ObjectClass cls, EvalFrame eval_frame) {
  std::set<int64_t> known;
  std::vector<MotFrame> frames;
  for (const Frame& f : seq.frames) {
    known.insert(f.frame_index);
    const RigidTransform cam_to_world = f.WorldToCamera().Inverse();
    auto place = [&](const Eigen::Vector3d& p) -> Eigen::Vector3d {
      return eval_frame == EvalFrame::kWorld ? cam_to_world.Apply(p) : p;
    };
    MotFrame mf;
    mf.frame_index = f.frame_index;
    for (const AnnotatedObject& o : f.objects) {
      if (o.class_id == cls) mf.gt.push_back({o.track_id, place(o.box.pose().position())});
    }
    if (auto it = tracks.frames.find(f.frame_index); it != tracks.frames.end()) {
      for (const TrackedObject& t : it->second) {
        if (t.class_id == cls) {
          mf.pred.push_back({t.track_id, place(t.box.pose().position())});
        }
      }
    }
    frames.push_back(std::move(mf));
  }
  for (const auto& [frame, list] : tracks.frames) {
    if (!list.empty() && !known.count(frame)) {
      throw Error(ErrorCode::kFrameRangeMismatch,
                  "tracks reference frame " + std::to_string(frame) +
                      " absent from sequence '" + seq.sequence_id + "'");
    }
  }
  return frames;
}

std::vector<std::pair<size_t, size_t>> FrameAssociate(
    const MotFrame& frame, double threshold, const Correspondences& carry) {
  std::vector<std::pair<size_t, size_t>> pairs;
  std::vector<char> gt_used(frame.gt.size(), 0), pred_used(frame.pred.size(), 0);
  const auto pred_by_id = IndexById(frame.pred);
  for (size_t g = 0; g < frame.gt.size(); ++g) {
    const auto c = carry.find(frame.gt[g].id);
    if (c == carry.end()) continue;
    const auto p = pred_by_id.find(c->second);
    if (p == pred_by_id.end() || pred_used[p->second]) continue;
    if (Dist(frame.gt[g], frame.pred[p->second]) <= threshold) {
      pairs.emplace_back(g, p->second);
      gt_used[g] = 1;
      pred_used[p->second] = 1;
    }
  }

  std::vector<size_t> rows, cols;
  for (size_t g = 0; g < frame.gt.size(); ++g) {
    if (!gt_used[g]) rows.push_back(g);
  }
  for (size_t p = 0; p < frame.pred.size(); ++p) {
    if (!pred_used[p]) cols.push_back(p);
  }
  if (!rows.empty() && !cols.empty()) {
    CostMatrix costs(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i) {
      for (size_t j = 0; j < cols.size(); ++j) {
        const double d = Dist(frame.gt[rows[i]], frame.pred[cols[j]]);
        if (d <= threshold) {
          costs.Set(i, j, d);
        } else {
          costs.Forbid(i, j);
        }
      }
    }
    for (const auto& [i, j] : MinCostMaxCardinality(costs).pairs) {
      pairs.emplace_back(rows[i], cols[j]);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

double ClearResult::mota() const {
  return 100.0 * (1.0 - double(fn + fp + idsw) / double(num_gt));
}

double ClearResult::moda() const {
  return 100.0 * (1.0 - double(fn + fp) / double(num_gt));
}

double ClearResult::motp() const {
  return matches > 0 ? distance_sum / double(matches) : 0.0;
}

ClearResult ClearMot(std::span<const MotFrame> frames, double threshold) {
  ClearResult r;
  Correspondences carry;
  std::map<int64_t, int64_t> last_pred;     // last ever matched pred per gt
  std::set<int64_t> matched_prev_frame;     // gt ids matched at t - 1
  std::map<int64_t, int64_t> segments;      // matched runs per gt
  for (const MotFrame& f : frames) {
    r.num_gt += int64_t(f.gt.size());
    const auto pairs = FrameAssociate(f, threshold, carry);
    Correspondences next;
    std::set<int64_t> matched_now;
    for (const auto& [g, p] : pairs) {
      const int64_t gid = f.gt[g].id;
      const int64_t pid = f.pred[p].id;
      if (auto it = last_pred.find(gid); it != last_pred.end() && it->second != pid) {
        ++r.idsw;
      }
      last_pred[gid] = pid;
      if (!matched_prev_frame.count(gid)) ++segments[gid];
      matched_now.insert(gid);
      next[gid] = pid;
      r.distance_sum += Dist(f.gt[g], f.pred[p]);
    }
    r.matches += int64_t(pairs.size());
    r.fn += int64_t(f.gt.size() - pairs.size());
    r.fp += int64_t(f.pred.size() - pairs.size());
    carry = std::move(next);
    matched_prev_frame = std::move(matched_now);
  }
  if (r.num_gt == 0) {
    throw Error(ErrorCode::kEmptyGroundTruth, "no ground truth objects");
  }
  for (const auto& [_, n] : segments) r.frag += std::max<int64_t>(n - 1, 0);
  return r;
}

double IdentityResult::idf1() const {
  const int64_t denom = 2 * idtp + idfp + idfn;
  return denom > 0 ? 100.0 * 2.0 * double(idtp) / double(denom) : 0.0;
}

IdentityResult IdentityMetrics(std::span<const MotFrame> frames,
                               double threshold) {
  std::map<int64_t, size_t> gt_index, pred_index;
  int64_t gt_total = 0, pred_total = 0;
  for (const MotFrame& f : frames) {
    for (const MotObject& o : f.gt) gt_index.emplace(o.id, gt_index.size());
    for (const MotObject& o : f.pred) pred_index.emplace(o.id, pred_index.size());
    gt_total += int64_t(f.gt.size());
    pred_total += int64_t(f.pred.size());
  }
  IdentityResult r;
  if (!gt_index.empty() && !pred_index.empty()) {
    std::vector<double> overlap(gt_index.size() * pred_index.size(), 0.0);
    for (const MotFrame& f : frames) {
      for (const MotObject& g : f.gt) {
        for (const MotObject& p : f.pred) {
          if (Dist(g, p) <= threshold) {
            overlap[gt_index[g.id] * pred_index.size() + pred_index[p.id]] += 1.0;
          }
        }
      }
    }
    CostMatrix weights(gt_index.size(), pred_index.size());
    for (size_t i = 0; i < gt_index.size(); ++i) {
      for (size_t j = 0; j < pred_index.size(); ++j) {
        weights.Set(i, j, overlap[i * pred_index.size() + j]);
      }
    }
    for (const auto& [i, j] : MaxWeightMatching(weights).pairs) {
      r.idtp += int64_t(weights.at(i, j));
    }
  }
  r.idfn = gt_total - r.idtp;
  r.idfp = pred_total - r.idtp;
  return r;
}

std::array<double, kHotaAlphaCount> HotaAlphas() {
  std::array<double, kHotaAlphaCount> a{};
  for (int i = 0; i < kHotaAlphaCount; ++i) a[i] = 0.05 * (i + 1);
  return a;
}

double HotaResult::DetA(int a) const {
  const int64_t denom = tp[a] + fn[a] + fp[a];
  return denom > 0 ? double(tp[a]) / double(denom) : 0.0;
}

double HotaResult::AssA(int a) const {
  return tp[a] > 0 ? ass_sum[a] / double(tp[a]) : 0.0;
}

double HotaResult::hota() const {
  double s = 0.0;
  for (int a = 0; a < kHotaAlphaCount; ++a) s += HotaAt(a);
  return 100.0 * s / kHotaAlphaCount;
}

double HotaResult::det_a() const {
  double s = 0.0;
  for (int a = 0; a < kHotaAlphaCount; ++a) s += DetA(a);
  return 100.0 * s / kHotaAlphaCount;
}

double HotaResult::ass_a() const {
  double s = 0.0;
  for (int a = 0; a < kHotaAlphaCount; ++a) s += AssA(a);
  return 100.0 * s / kHotaAlphaCount;
}

HotaResult Hota(std::span<const MotFrame> frames, double threshold) {
  const auto alphas = HotaAlphas();
  std::map<int64_t, int64_t> gt_count, pred_count;
  for (const MotFrame& f : frames) {
    for (const MotObject& o : f.gt) ++gt_count[o.id];
    for (const MotObject& o : f.pred) ++pred_count[o.id];
  }
  HotaResult r;
  for (int a = 0; a < kHotaAlphaCount; ++a) {
    std::map<std::pair<int64_t, int64_t>, int64_t> pair_matches;
    for (const MotFrame& f : frames) {
      int64_t tp = 0;
      if (!f.gt.empty() && !f.pred.empty()) {
        CostMatrix sim(f.gt.size(), f.pred.size());
        for (size_t g = 0; g < f.gt.size(); ++g) {
          for (size_t p = 0; p < f.pred.size(); ++p) {
            const double s = std::max(0.0, 1.0 - Dist(f.gt[g], f.pred[p]) / threshold);
            if (s >= alphas[a]) {
              sim.Set(g, p, s);
            } else {
              sim.Forbid(g, p);
            }
          }
        }
        for (const auto& [g, p] : MaxWeightMatching(sim).pairs) {
          ++pair_matches[{f.gt[g].id, f.pred[p].id}];
          ++tp;
        }
      }
      r.tp[a] += tp;
      r.fn[a] += int64_t(f.gt.size()) - tp;
      r.fp[a] += int64_t(f.pred.size()) - tp;
    }
    for (const auto& [ids, n] : pair_matches) {
      const double tpa = double(n);
      const double score =
          tpa / (double(gt_count[ids.first] + pred_count[ids.second]) - tpa);
      r.ass_sum[a] += tpa * score;
    }
  }
  return r;
}

MotClassResult EvaluateMotClass(std::span<const MotFrame> frames,
                                double threshold) {
  MotClassResult r;
  r.clear = ClearMot(frames, threshold);
  r.identity = IdentityMetrics(frames, threshold);
  r.hota = Hota(frames, threshold);
  return r;
}

MotClassResult CombineMot(std::span<const MotClassResult> parts) {
  MotClassResult out;
  for (const MotClassResult& p : parts) {
    out.clear.num_gt += p.clear.num_gt;
    out.clear.matches += p.clear.matches;
    out.clear.fn += p.clear.fn;
    out.clear.fp += p.clear.fp;
    out.clear.idsw += p.clear.idsw;
    out.clear.frag += p.clear.frag;
    out.clear.distance_sum += p.clear.distance_sum;
    out.identity.idtp += p.identity.idtp;
    out.identity.idfp += p.identity.idfp;
    out.identity.idfn += p.identity.idfn;
    for (int a = 0; a < kHotaAlphaCount; ++a) {
      out.hota.tp[a] += p.hota.tp[a];
      out.hota.fn[a] += p.hota.fn[a];
      out.hota.fp[a] += p.hota.fp[a];
      out.hota.ass_sum[a] += p.hota.ass_sum[a];
    }
  }
  return out;
}

}  // namespace laa3d
