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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "laa3d/assignment.h"
#include "laa3d/data_model.h"
#include "laa3d/detection_metrics.h"
#include "laa3d/error.h"
#include "laa3d/mot_metrics.h"
#include "laa3d/synthgen.h"
#include "laa3d/tracking.h"

namespace laa3d::cli {
namespace {

namespace fs = std::filesystem;

std::string Num(double v) { return FormatNumber(v); }

uint64_t Fnv1a64(std::string_view data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitComma(std::string_view s) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    const size_t c = s.find(',', pos);
    out.push_back(Trim(s.substr(pos, c == std::string_view::npos ? c : c - pos)));
    if (c == std::string_view::npos) break;
    pos = c + 1;
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)>& fn) {
  const size_t workers = std::min<size_t>(n, size_t(std::max(jobs, 1)));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// --- settings ------------------------------------------------------------

const char* const kParamKeys[] = {"ap_thresholds", "tp_max_translation",
                                  "tp_max_rotation", "tp_max_size",
                                  "mot_threshold", "depth_range"};

std::map<std::string, std::string> DefaultSettings() {
  std::map<std::string, std::string> s = {
      {"classes", "MAV,eVTOL,Helicopter"},
      {"frame", "world"},
      {"seed", "0"},
      {"jobs", "1"},
      {"ase_mode", "relative"},
      {"ap_trim", "false"},
      {"min_iou", "0.1"},
      {"max_age", "2"},
      {"min_hits", "3"},
      {"fps", "10"},
      {"history", "3"},
      {"horizon", "10"},
      {"process_accel", "1"},
      {"measurement_sigma", "0.5"},
  };
  const ClassConfig config = DefaultClassConfig();
  for (ObjectClass c : kAllClasses) {
    const ClassParams& p = config[c];
    const std::string name(ClassName(c));
    s[name + ".ap_thresholds"] = Num(p.ap_thresholds[0]) + "," +
                                 Num(p.ap_thresholds[1]) + "," +
                                 Num(p.ap_thresholds[2]) + "," +
                                 Num(p.ap_thresholds[3]);
    s[name + ".tp_max_translation"] = Num(p.tp_max_translation);
    s[name + ".tp_max_rotation"] = Num(p.tp_max_rotation);
    s[name + ".tp_max_size"] = Num(p.tp_max_size);
    s[name + ".mot_threshold"] = Num(p.mot_threshold);
    s[name + ".depth_range"] = Num(p.depth_range);
  }
  return s;
}

// Effective configuration: flags over config file over defaults.
class Settings {
 public:
  Settings() : values_(DefaultSettings()) {}

  void Set(const std::string& key, const std::string& value,
           const std::string& origin) {
    if (!values_.count(key)) {
      throw Error(ErrorCode::kSchema, origin + ": unknown setting '" + key + "'");
    }
    values_[key] = value;
  }

  void LoadFile(const fs::path& path) {
    const std::string text = ReadTextFile(path);
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      const std::string t = Trim(line);
      if (t.empty() || t[0] == '#') continue;
      const size_t eq = t.find('=');
      const std::string origin = path.string() + ":" + std::to_string(number);
      if (eq == std::string::npos) {
        throw Error(ErrorCode::kParse, origin + ": expected 'key = value'");
      }
      Set(Trim(t.substr(0, eq)), Trim(t.substr(eq + 1)), origin);
    }
  }

  const std::string& Get(const std::string& key) const { return values_.at(key); }

  double Number(const std::string& key) const {
    const std::string& v = Get(key);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
      throw Error(ErrorCode::kParse, "setting " + key + ": bad number '" + v + "'");
    }
    return out;
  }

  template <typename Int>
  Int Integer(const std::string& key) const {
    const std::string& v = Get(key);
    Int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw Error(ErrorCode::kParse, "setting " + key + ": bad integer '" + v + "'");
    }
    return out;
  }

  bool Bool(const std::string& key) const {
    const std::string& v = Get(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw Error(ErrorCode::kParse, "setting " + key + ": expected true or false");
  }

  std::vector<ObjectClass> Classes() const {
    std::vector<ObjectClass> out;
    for (const std::string& name : SplitComma(Get("classes"))) {
      const auto c = ParseClassName(name);
      if (!c) throw Error(ErrorCode::kParse, "unknown class '" + name + "'");
      if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  EvalFrame Frame() const {
    const std::string& v = Get("frame");
    if (v == "camera") return EvalFrame::kCamera;
    if (v == "world") return EvalFrame::kWorld;
    throw Error(ErrorCode::kParse, "frame must be 'camera' or 'world'");
  }

  SizeErrorMode SizeMode() const {
    const std::string& v = Get("ase_mode");
    if (v == "relative") return SizeErrorMode::kRelativePercent;
    if (v == "absolute") return SizeErrorMode::kAbsoluteMeters;
    throw Error(ErrorCode::kParse, "ase_mode must be 'relative' or 'absolute'");
  }

  ClassConfig Config() const {
    ClassConfig config;
    for (ObjectClass c : kAllClasses) {
      const std::string name(ClassName(c));
      ClassParams& p = config[c];
      const auto thresholds = SplitComma(Get(name + ".ap_thresholds"));
      if (thresholds.size() != 4) {
        throw Error(ErrorCode::kParse, name + ".ap_thresholds needs 4 values");
      }
      for (size_t i = 0; i < 4; ++i) {
        double v = 0.0;
        const std::string& t = thresholds[i];
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) {
          throw Error(ErrorCode::kParse, name + ".ap_thresholds: bad number '" + t + "'");
        }
        p.ap_thresholds[i] = v;
      }
      p.tp_max_translation = Number(name + ".tp_max_translation");
      p.tp_max_rotation = Number(name + ".tp_max_rotation");
      p.tp_max_size = Number(name + ".tp_max_size");
      p.mot_threshold = Number(name + ".mot_threshold");
      p.depth_range = Number(name + ".depth_range");
    }
    config.Validate();
    return config;
  }

  int Jobs() const {
    const int jobs = Integer<int>("jobs");
    if (jobs < 1) throw Error(ErrorCode::kInvariant, "jobs must be at least 1");
    return jobs;
  }

  std::string Dump(std::string_view prefix, std::string_view sep) const {
    std::string out;
    for (const auto& [k, v] : values_) {
      out += std::string(prefix) + k + std::string(sep) + v + "\n";
    }
    return out;
  }

 private:
  std::map<std::string, std::string> values_;
};

// --- manifest and reports --------------------------------------------------

struct InputRecord {
  std::string role;
  fs::path path;
  uint64_t hash = 0;
};

struct Manifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<InputRecord> inputs;
  std::string settings_dump;  // "key = value" lines
  std::string started_utc;
  double wall_seconds = 0.0;
};

// Location-independent part of the manifest, embedded in every report.
std::string EmbeddedManifest(const Manifest& m, const Settings& s) {
  std::string out = "manifest:\n";
  out += "  toolkit: " + std::string(kToolkitVersion) + "\n";
  out += "  command: " + m.command + "\n";
  for (const InputRecord& in : m.inputs) {
    out += "  input." + in.role + ": " + in.path.filename().string() +
           " fnv1a64=" + Hex64(in.hash) + "\n";
  }
  out += s.Dump("  config.", ": ");
  return out;
}

std::string ManifestText(const Manifest& m) {
  std::string out = "LAA3D-MANIFEST v1\n";
  out += "toolkit = " + std::string(kToolkitVersion) + "\n";
  out += "command = " + m.command + "\n";
  for (const std::string& a : m.args) out += "arg = " + a + "\n";
  for (const InputRecord& in : m.inputs) {
    out += "input " + in.role + " = " + in.path.string() + " fnv1a64=" +
           Hex64(in.hash) + "\n";
  }
  std::istringstream settings(m.settings_dump);
  std::string line;
  while (std::getline(settings, line)) out += "config " + line + "\n";
  out += "started_utc = " + m.started_utc + "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", m.wall_seconds);
  out += "wall_time_s = " + std::string(buf) + "\n";
  return out;
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Key/value report document with two-space nesting.
class ReportDoc {
 public:
  void Open(const std::string& key) {
    text_ += Indent() + key + ":\n";
    ++depth_;
  }
  void Close() { --depth_; }
  void Put(const std::string& key, const std::string& value) {
    text_ += Indent() + key + ": " + value + "\n";
  }
  void Put(const std::string& key, double value) { Put(key, Num(value)); }
  void PutCount(const std::string& key, int64_t value) {
    Put(key, std::to_string(value));
  }
  void Raw(const std::string& text) { text_ += text; }
  const std::string& text() const { return text_; }

 private:
  std::string Indent() const { return std::string(2 * depth_, ' '); }
  std::string text_;
  int depth_ = 0;
};

// Everything a subcommand needs besides its own inputs.
struct RunContext {
  Settings settings;
  Manifest manifest;
  fs::path out_dir;
  std::ostream* out = nullptr;
  std::chrono::steady_clock::time_point start;

  std::string ReadInput(const std::string& role, const fs::path& path) {
    std::string text = ReadTextFile(path);
    manifest.inputs.push_back({role, path, Fnv1a64(text)});
    return text;
  }

  void PrepareOut() {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      throw Error(ErrorCode::kIo, "cannot create output directory " +
                                      out_dir.string() + ": " + ec.message());
    }
  }

  void Write(const std::string& name, std::string_view text) {
    WriteTextFile(out_dir / name, text);
  }

  void WriteReport(ReportDoc& doc, const std::string& csv) {
    Write("report.txt", EmbeddedManifest(manifest, settings) + doc.text());
    Write("report.csv", csv);
  }

  void Finish() {
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Write("manifest.txt", ManifestText(manifest));
  }
};

// --- eval-det ----------------------------------------------------------------

void CheckPaired(const std::vector<std::string>& a, const std::vector<std::string>& b,
                 const std::string& what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kSchema, "need one " + what + " file per --gt file (" +
                                        std::to_string(a.size()) + " vs " +
                                        std::to_string(b.size()) + ")");
  }
}

int EvalDet(RunContext& ctx, const std::vector<std::string>& gt_paths,
            const std::vector<std::string>& det_paths) {
  CheckPaired(gt_paths, det_paths, "--det");
  const Settings& s = ctx.settings;
  const ClassConfig config = s.Config();
  DetectionEvalOptions options;
  options.ap.trim = s.Bool("ap_trim");
  options.size_mode = s.SizeMode();
  options.tp_min_iou = s.Number("min_iou");
  options.classes = s.Classes();
  options.jobs = s.Jobs();

  std::vector<FrameSample> samples;
  for (size_t i = 0; i < gt_paths.size(); ++i) {
    const Sequence seq = ParseSequence(ctx.ReadInput("gt", gt_paths[i]));
    const DetectionSet dets = ParseDetections(ctx.ReadInput("det", det_paths[i]));
    auto part = MakeFrameSamples(seq, dets);
    samples.insert(samples.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
  }
  const AdsReport report = EvaluateDetections(samples, config, options);

  ctx.PrepareOut();
  ReportDoc doc;
  std::string csv = "class,metric,value\n";
  auto row = [&csv](const std::string& cls, const std::string& metric, double v) {
    csv += cls + "," + metric + "," + Num(v) + "\n";
  };
  doc.Open("classes");
  for (const auto& [cls, r] : report.classes) {
    const std::string name(ClassName(cls));
    const ClassParams& p = config[cls];
    doc.Open(name);
    for (size_t t = 0; t < 4; ++t) {
      const std::string key = "AP@" + Num(p.ap_thresholds[t]);
      doc.Put(key, 100.0 * r.ap_per_threshold[t]);
      row(name, key, 100.0 * r.ap_per_threshold[t]);
      std::string pr = "recall,precision,score\n";
      for (const PrPoint& pt : r.curves[t].points) {
        pr += Num(pt.recall) + "," + Num(pt.precision) + "," + Num(pt.score) + "\n";
      }
      ctx.Write("pr_" + name + "_" + Num(p.ap_thresholds[t]) + ".csv", pr);
    }
    const std::pair<const char*, double> metrics[] = {
        {"AP", r.class_ap}, {"ATE", r.ate}, {"AOE", r.aoe}, {"ASE", r.ase},
        {"DR", r.dr},       {"n_tp", double(r.n_tp)}, {"n_gt", double(r.n_gt)}};
    for (const auto& [key, v] : metrics) {
      doc.Put(key, v);
      row(name, key, v);
    }
    doc.Close();
  }
  doc.Close();
  doc.Open("summary");
  const std::pair<const char*, double> summary[] = {
      {"mAP", report.map},
      {"mATE", report.mate},
      {"mAOE", report.maoe},
      {"mASE", report.mase},
      {"mDR", report.mdr},
      {"N_translation", report.norm_translation},
      {"N_rotation", report.norm_rotation},
      {"N_size", report.norm_size},
      {"ADS", report.ads}};
  for (const auto& [key, v] : summary) {
    doc.Put(key, v);
    row("ALL", key, v);
  }
  doc.Close();
  ctx.WriteReport(doc, csv);
  *ctx.out << "ADS " << Num(report.ads) << "\n";
  return kExitOk;
}

// --- eval-mot ----------------------------------------------------------------

// Column order follows the usual tracking result tables; extra counts trail.
constexpr char kMotCsvHeader[] =
    "sequence,class,MOTA,MOTP,MODA,IDSW,IDF1,IDTP,IDFP,IDFN,HOTA,DetA,AssA,"
    "Frag,FN,FP,matches,num_gt\n";

void PutMot(ReportDoc& doc, std::string& csv, const std::string& seq_name,
            const std::string& cls, const MotClassResult& r) {
  const ClearResult& c = r.clear;
  const std::pair<const char*, double> metrics[] = {
      {"MOTA", c.mota()},
      {"MOTP", c.motp()},
      {"MODA", c.moda()},
      {"IDSW", double(c.idsw)},
      {"IDF1", r.identity.idf1()},
      {"IDTP", double(r.identity.idtp)},
      {"IDFP", double(r.identity.idfp)},
      {"IDFN", double(r.identity.idfn)},
      {"HOTA", r.hota.hota()},
      {"DetA", r.hota.det_a()},
      {"AssA", r.hota.ass_a()},
      {"Frag", double(c.frag)},
      {"FN", double(c.fn)},
      {"FP", double(c.fp)},
      {"matches", double(c.matches)},
      {"num_gt", double(c.num_gt)}};
  doc.Open(cls);
  csv += seq_name + "," + cls;
  for (const auto& [key, v] : metrics) {
    doc.Put(key, v);
    csv += "," + Num(v);
  }
  csv += "\n";
  doc.Open("HOTA_per_alpha");
  const auto alphas = HotaAlphas();
  for (int a = 0; a < kHotaAlphaCount; ++a) {
    doc.Put(Num(alphas[a]), Num(100.0 * r.hota.HotaAt(a)) + " DetA " +
                                Num(100.0 * r.hota.DetA(a)) + " AssA " +
                                Num(100.0 * r.hota.AssA(a)));
  }
  doc.Close();
  doc.Close();
}

int EvalMot(RunContext& ctx, const std::vector<std::string>& gt_paths,
            const std::vector<std::string>& track_paths) {
  CheckPaired(gt_paths, track_paths, "--tracks");
  const Settings& s = ctx.settings;
  const ClassConfig config = s.Config();
  const std::vector<ObjectClass> classes = s.Classes();
  const EvalFrame frame = s.Frame();

  std::vector<Sequence> seqs;
  std::vector<TrackSet> tracks;
  for (size_t i = 0; i < gt_paths.size(); ++i) {
    seqs.push_back(ParseSequence(ctx.ReadInput("gt", gt_paths[i])));
    tracks.push_back(ParseTracks(ctx.ReadInput("tracks", track_paths[i])));
    ValidateTrackSet(tracks.back());
  }

  // results[seq][class]; absent when the class has no ground truth there.
  std::vector<std::map<ObjectClass, MotClassResult>> results(seqs.size());
  ParallelFor(seqs.size(), s.Jobs(), [&](size_t i) {
    for (ObjectClass cls : classes) {
      const auto frames = BuildMotFrames(seqs[i], tracks[i], cls, frame);
      const bool has_gt = std::any_of(frames.begin(), frames.end(),
                                      [](const MotFrame& f) { return !f.gt.empty(); });
      if (!has_gt) continue;
      results[i][cls] = EvaluateMotClass(frames, config[cls].mot_threshold);
    }
  });

  ReportDoc doc;
  std::string csv = kMotCsvHeader;
  doc.Open("sequences");
  for (size_t i = 0; i < seqs.size(); ++i) {
    doc.Open(seqs[i].sequence_id);
    for (const auto& [cls, r] : results[i]) {
      PutMot(doc, csv, seqs[i].sequence_id, std::string(ClassName(cls)), r);
    }
    doc.Close();
  }
  doc.Close();
  doc.Open("combined");
  bool any = false;
  std::optional<MotClassResult> first;
  for (ObjectClass cls : classes) {
    std::vector<MotClassResult> parts;
    for (const auto& per_seq : results) {
      const auto it = per_seq.find(cls);
      if (it != per_seq.end()) parts.push_back(it->second);
    }
    if (parts.empty()) continue;
    any = true;
    const MotClassResult combined = CombineMot(parts);
    PutMot(doc, csv, "ALL", std::string(ClassName(cls)), combined);
    *ctx.out << ClassName(cls) << " MOTA " << Num(combined.clear.mota()) << " HOTA "
             << Num(combined.hota.hota()) << "\n";
  }
  doc.Close();
  if (!any) {
    throw Error(ErrorCode::kEmptyGroundTruth, "no ground truth for the selected classes");
  }
  ctx.PrepareOut();
  ctx.WriteReport(doc, csv);
  return kExitOk;
}

// --- eval-pose ---------------------------------------------------------------

std::vector<Eigen::Vector3d> CornerModel(const Box3D& box) {
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 8; ++i) {
    pts.emplace_back((i & 1 ? 0.5 : -0.5) * box.length(),
                     (i & 2 ? 0.5 : -0.5) * box.width(),
                     (i & 4 ? 0.5 : -0.5) * box.height());
  }
  return pts;
}

int EvalPose(RunContext& ctx, const std::vector<std::string>& gt_paths,
             const std::vector<std::string>& det_paths) {
  CheckPaired(gt_paths, det_paths, "--det");
  const Settings& s = ctx.settings;
  const ClassConfig config = s.Config();
  const std::vector<ObjectClass> classes = s.Classes();

  struct Tally {
    std::vector<double> add, adds, diameters;
    int64_t n_gt = 0, n_matched = 0;
  };
  std::map<ObjectClass, Tally> tallies;
  constexpr double kMissed = std::numeric_limits<double>::infinity();

  for (size_t i = 0; i < gt_paths.size(); ++i) {
    const Sequence seq = ParseSequence(ctx.ReadInput("gt", gt_paths[i]));
    const DetectionSet dets = ParseDetections(ctx.ReadInput("det", det_paths[i]));
    const auto samples = MakeFrameSamples(seq, dets);
    for (const FrameSample& f : samples) {
      for (ObjectClass cls : classes) {
        std::vector<const AnnotatedObject*> gts;
        std::vector<const Detection*> preds;
        for (const auto& g : f.gts) {
          if (g.class_id == cls) gts.push_back(&g);
        }
        for (const auto& p : f.preds) {
          if (p.class_id == cls) preds.push_back(&p);
        }
        if (gts.empty()) continue;
        Tally& t = tallies[cls];
        std::vector<double> scores;
        for (const auto* p : preds) scores.push_back(p->score);
        const Matching m = GreedyMatch(
            scores, gts.size(),
            [&](size_t p, size_t g) {
              return CenterDistance(preds[p]->box.pose(), gts[g]->box.pose());
            },
            config[cls].mot_threshold);
        std::vector<std::optional<size_t>> pred_for(gts.size());
        for (const auto& [p, g] : m.pairs) pred_for[g] = p;
        for (size_t g = 0; g < gts.size(); ++g) {
          const Box3D& gb = gts[g]->box;
          ++t.n_gt;
          t.diameters.push_back(gb.diameter());
          if (!pred_for[g]) {
            t.add.push_back(kMissed);
            t.adds.push_back(kMissed);
            continue;
          }
          ++t.n_matched;
          const auto model = CornerModel(gb);
          const Pose6DoF& pp = preds[*pred_for[g]]->box.pose();
          t.add.push_back(AddError(model, pp, gb.pose()));
          t.adds.push_back(AddsError(model, pp, gb.pose()));
        }
      }
    }
  }
  if (tallies.empty()) {
    throw Error(ErrorCode::kEmptyGroundTruth, "no ground truth for the selected classes");
  }

  auto finite_mean = [](const std::vector<double>& v) {
    double sum = 0.0;
    int64_t n = 0;
    for (double x : v) {
      if (std::isfinite(x)) {
        sum += x;
        ++n;
      }
    }
    return n ? sum / double(n) : 0.0;
  };

  ReportDoc doc;
  std::string csv = "class,metric,value\n";
  double add_acc_sum = 0.0, adds_acc_sum = 0.0;
  doc.Open("classes");
  for (const auto& [cls, t] : tallies) {
    const std::string name(ClassName(cls));
    const double add_acc = PoseAccuracyAtHalfDiameter(t.add, t.diameters);
    const double adds_acc = PoseAccuracyAtHalfDiameter(t.adds, t.diameters);
    add_acc_sum += add_acc;
    adds_acc_sum += adds_acc;
    const std::pair<const char*, double> metrics[] = {
        {"ADD_accuracy", add_acc},
        {"ADD-S_accuracy", adds_acc},
        {"mean_ADD", finite_mean(t.add)},
        {"mean_ADD-S", finite_mean(t.adds)},
        {"n_matched", double(t.n_matched)},
        {"n_gt", double(t.n_gt)}};
    doc.Open(name);
    for (const auto& [key, v] : metrics) {
      doc.Put(key, v);
      csv += name + "," + key + "," + Num(v) + "\n";
    }
    doc.Close();
  }
  doc.Close();
  doc.Open("summary");
  const double n = double(tallies.size());
  doc.Put("ADD_accuracy", add_acc_sum / n);
  doc.Put("ADD-S_accuracy", adds_acc_sum / n);
  csv += "ALL,ADD_accuracy," + Num(add_acc_sum / n) + "\n";
  csv += "ALL,ADD-S_accuracy," + Num(adds_acc_sum / n) + "\n";
  doc.Close();
  ctx.PrepareOut();
  ctx.WriteReport(doc, csv);
  *ctx.out << "ADD accuracy " << Num(add_acc_sum / n) << " ADD-S accuracy "
           << Num(adds_acc_sum / n) << "\n";
  return kExitOk;
}

// --- track -------------------------------------------------------------------

int Track(RunContext& ctx, const std::string& det_path, const std::string& gt_path) {
  const Settings& s = ctx.settings;
  TrackerParams params = DefaultTrackerParams(s.Config());
  params.max_age = s.Integer<int>("max_age");
  params.min_hits = s.Integer<int>("min_hits");
  params.noise.process_accel = s.Number("process_accel");
  params.noise.measurement_sigma = s.Number("measurement_sigma");
  const double fps = s.Number("fps");
  params.fallback_fps = fps;
  if (params.max_age < 0 || params.min_hits < 1 || !(fps > 0.0) ||
      !(params.noise.process_accel > 0.0) || !(params.noise.measurement_sigma > 0.0)) {
    throw Error(ErrorCode::kInvariant,
                "tracker needs max_age >= 0, min_hits >= 1 and positive fps and noise");
  }

  DetectionSet dets = ParseDetections(ctx.ReadInput("det", det_path));
  const std::vector<ObjectClass> classes = s.Classes();
  for (auto& [idx, list] : dets.frames) {
    std::erase_if(list, [&](const Detection& d) {
      return std::find(classes.begin(), classes.end(), d.class_id) == classes.end();
    });
  }
  std::vector<TrackerFrame> frames;
  if (!gt_path.empty()) {
    const Sequence seq = ParseSequence(ctx.ReadInput("gt", gt_path));
    frames = TrackerFramesFromSequence(seq, dets, s.Frame() == EvalFrame::kWorld);
  } else {
    frames = TrackerFramesFromDetections(dets, fps);
  }
  const TrackSet tracks = RunTracker(frames, params);

  std::set<int64_t> ids;
  for (const auto& [idx, list] : tracks.frames) {
    for (const auto& t : list) ids.insert(t.track_id);
  }
  ctx.PrepareOut();
  ctx.Write("tracks.txt", SerializeTracks(tracks));
  ReportDoc doc;
  doc.Open("summary");
  doc.PutCount("frames", int64_t(frames.size()));
  doc.PutCount("detections", int64_t(dets.size()));
  doc.PutCount("tracks", int64_t(ids.size()));
  doc.PutCount("track_boxes", int64_t(tracks.size()));
  doc.Close();
  std::string csv = "metric,value\n";
  csv += "frames," + std::to_string(frames.size()) + "\n";
  csv += "detections," + std::to_string(dets.size()) + "\n";
  csv += "tracks," + std::to_string(ids.size()) + "\n";
  csv += "track_boxes," + std::to_string(tracks.size()) + "\n";
  ctx.WriteReport(doc, csv);
  *ctx.out << "tracks " << ids.size() << "\n";
  return kExitOk;
}

// --- predict -----------------------------------------------------------------

int Predict(RunContext& ctx, const std::vector<std::string>& gt_paths) {
  const Settings& s = ctx.settings;
  const int history = s.Integer<int>("history");
  const int horizon = s.Integer<int>("horizon");
  if (history < 2 || horizon < 1) {
    throw Error(ErrorCode::kInvariant, "predict needs history >= 2 and horizon >= 1");
  }
  KalmanNoise noise;
  noise.process_accel = s.Number("process_accel");
  noise.measurement_sigma = s.Number("measurement_sigma");
  const EvalFrame frame = s.Frame();
  const std::vector<ObjectClass> classes = s.Classes();
  const size_t window = size_t(history + horizon);

  struct Tally {
    double ade_sum = 0.0, fde_sum = 0.0;
    int64_t windows = 0, tracks = 0, skipped = 0;
  };
  std::map<ObjectClass, Tally> tallies;
  std::string predictions = "sequence,class,track_id,start_frame,step,x,y,z\n";

  for (const std::string& path : gt_paths) {
    const Sequence seq = ParseSequence(ctx.ReadInput("gt", path));
    for (ObjectClass cls : classes) {
      const auto frames = BuildMotFrames(seq, TrackSet{}, cls, frame);
      // Per track: runs of (position in sequence, timestamp, position).
      struct Obs {
        size_t slot;
        TimedPoint point;
        int64_t frame_index;
      };
      std::map<int64_t, std::vector<Obs>> by_track;
      for (size_t k = 0; k < frames.size(); ++k) {
        for (const MotObject& o : frames[k].gt) {
          by_track[o.id].push_back(
              {k, {seq.frames[k].timestamp, o.position}, frames[k].frame_index});
        }
      }
      for (const auto& [id, obs] : by_track) {
        Tally& t = tallies[cls];
        bool used = false;
        size_t run_start = 0;
        for (size_t i = 1; i <= obs.size(); ++i) {
          if (i < obs.size() && obs[i].slot == obs[i - 1].slot + 1) continue;
          // Run [run_start, i).
          for (size_t w = run_start; w + window <= i; ++w) {
            std::vector<TimedPoint> hist;
            for (size_t j = 0; j < size_t(history); ++j) hist.push_back(obs[w + j].point);
            std::vector<Eigen::Vector3d> truth;
            for (size_t j = size_t(history); j < window; ++j) {
              truth.push_back(obs[w + j].point.position);
            }
            const auto pred = PredictTrajectory(hist, horizon, noise);
            const DisplacementError e = AdeFde(pred, truth);
            t.ade_sum += e.ade;
            t.fde_sum += e.fde;
            ++t.windows;
            used = true;
            for (int step = 0; step < horizon; ++step) {
              predictions += seq.sequence_id + "," + std::string(ClassName(cls)) + "," +
                             std::to_string(id) + "," +
                             std::to_string(obs[w].frame_index) + "," +
                             std::to_string(step + 1) + "," + Num(pred[step].x()) + "," +
                             Num(pred[step].y()) + "," + Num(pred[step].z()) + "\n";
            }
          }
          run_start = i;
        }
        if (used) {
          ++t.tracks;
        } else {
          ++t.skipped;
        }
      }
    }
  }

  ReportDoc doc;
  std::string csv = "class,metric,value\n";
  Tally all;
  doc.Open("classes");
  for (const auto& [cls, t] : tallies) {
    const std::string name(ClassName(cls));
    all.ade_sum += t.ade_sum;
    all.fde_sum += t.fde_sum;
    all.windows += t.windows;
    all.tracks += t.tracks;
    all.skipped += t.skipped;
    const double w = t.windows ? double(t.windows) : 1.0;
    const std::pair<const char*, double> metrics[] = {
        {"ADE", t.ade_sum / w},
        {"FDE", t.fde_sum / w},
        {"windows", double(t.windows)},
        {"tracks", double(t.tracks)},
        {"skipped_tracks", double(t.skipped)}};
    doc.Open(name);
    for (const auto& [key, v] : metrics) {
      doc.Put(key, v);
      csv += name + "," + key + "," + Num(v) + "\n";
    }
    doc.Close();
  }
  doc.Close();
  const double w = all.windows ? double(all.windows) : 1.0;
  doc.Open("summary");
  doc.PutCount("history", history);
  doc.PutCount("horizon", horizon);
  doc.Put("ADE", all.ade_sum / w);
  doc.Put("FDE", all.fde_sum / w);
  doc.PutCount("windows", all.windows);
  doc.PutCount("tracks", all.tracks);
  doc.PutCount("skipped_tracks", all.skipped);
  doc.Close();
  csv += "ALL,ADE," + Num(all.ade_sum / w) + "\n";
  csv += "ALL,FDE," + Num(all.fde_sum / w) + "\n";
  csv += "ALL,windows," + std::to_string(all.windows) + "\n";
  csv += "ALL,skipped_tracks," + std::to_string(all.skipped) + "\n";
  ctx.PrepareOut();
  ctx.Write("predictions.csv", predictions);
  ctx.WriteReport(doc, csv);
  *ctx.out << "ADE " << Num(all.ade_sum / w) << " FDE " << Num(all.fde_sum / w)
           << " windows " << all.windows << " skipped_tracks " << all.skipped << "\n";
  return kExitOk;
}

// --- simulate ----------------------------------------------------------------

std::string SerializeLedger(const CorruptionLedger& ledger) {
  std::string out = "LAA3D-LEDGER v1\n";
  for (const DropEvent& d : ledger.drops) {
    out += "DROP " + std::to_string(d.frame_index) + " " + std::to_string(d.track_id) + "\n";
  }
  for (const FalsePositiveEvent& f : ledger.false_positives) {
    out += "FP " + std::to_string(f.frame_index) + " " + std::string(ClassName(f.class_id)) +
           " " + std::to_string(f.emitted_id) + " " + Num(f.position.x()) + " " +
           Num(f.position.y()) + " " + Num(f.position.z()) + "\n";
  }
  for (const SwitchEvent& e : ledger.switches) {
    out += "SWITCH " + std::to_string(e.frame_index) + " " + std::to_string(e.track_a) +
           " " + std::to_string(e.track_b) + "\n";
  }
  return out;
}

int Simulate(RunContext& ctx, const std::string& spec_path, bool seed_given) {
  ScenarioSpec spec = ParseScenario(ctx.ReadInput("spec", spec_path));
  const uint64_t seed = ctx.settings.Integer<uint64_t>("seed");
  if (seed_given) {
    spec.seed = seed;
    if (spec.corruption) spec.corruption->seed = seed;
  }
  SimulationLog log;
  const Sequence seq = SimulateSequence(spec, &log);
  CorruptionModel model;
  if (spec.corruption) {
    model = *spec.corruption;
  } else {
    model.tp_score_lo = model.tp_score_hi = 1.0;
  }
  const CorruptionOutput corrupted = CorruptDetections(seq, model, ctx.settings.Config());

  ctx.PrepareOut();
  ctx.Write("sequence.txt", SerializeSequence(seq));
  ctx.Write("detections.txt", SerializeDetections(corrupted.detections));
  ctx.Write("tracks.txt", SerializeTracks(corrupted.tracks));
  ctx.Write("ledger.txt", SerializeLedger(corrupted.ledger));

  int64_t annotations = 0;
  for (const Frame& f : seq.frames) annotations += int64_t(f.objects.size());
  ReportDoc doc;
  doc.Open("summary");
  doc.PutCount("frames", int64_t(seq.frames.size()));
  doc.PutCount("objects", int64_t(spec.objects.size()));
  doc.PutCount("annotations", annotations);
  doc.PutCount("out_of_view", int64_t(log.dropped.size()));
  doc.PutCount("detections", int64_t(corrupted.detections.size()));
  doc.PutCount("ledger_drops", int64_t(corrupted.ledger.drops.size()));
  doc.PutCount("ledger_false_positives", int64_t(corrupted.ledger.false_positives.size()));
  doc.PutCount("ledger_switches", int64_t(corrupted.ledger.switches.size()));
  doc.Close();
  std::string csv = "metric,value\n";
  csv += "frames," + std::to_string(seq.frames.size()) + "\n";
  csv += "annotations," + std::to_string(annotations) + "\n";
  csv += "out_of_view," + std::to_string(log.dropped.size()) + "\n";
  csv += "detections," + std::to_string(corrupted.detections.size()) + "\n";
  csv += "ledger_drops," + std::to_string(corrupted.ledger.drops.size()) + "\n";
  csv += "ledger_false_positives," +
         std::to_string(corrupted.ledger.false_positives.size()) + "\n";
  csv += "ledger_switches," + std::to_string(corrupted.ledger.switches.size()) + "\n";
  ctx.WriteReport(doc, csv);
  *ctx.out << "annotations " << annotations << " detections "
           << corrupted.detections.size() << "\n";
  return kExitOk;
}

// --- replay ------------------------------------------------------------------

std::vector<std::string> ManifestArgs(const fs::path& path) {
  const std::string text = ReadTextFile(path);
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> args;
  bool header = false;
  while (std::getline(in, line)) {
    if (!header) {
      if (line != "LAA3D-MANIFEST v1") {
        throw Error(ErrorCode::kParse, path.string() + ": not a manifest");
      }
      header = true;
      continue;
    }
    if (line.rfind("arg = ", 0) == 0) args.push_back(line.substr(6));
  }
  if (args.empty()) throw Error(ErrorCode::kSchema, path.string() + ": no arguments");
  return args;
}

// --- dispatch ----------------------------------------------------------------

struct Binding {
  std::string key;
  CLI::Option* option;
};

int Dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Evaluation toolkit for monocular 3D aircraft detection and tracking",
               "laa3d"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolkitVersion);

  std::map<std::string, std::string> flag_values;
  std::vector<Binding> bindings;
  std::string config_path, out_dir = ".";
  bool ap_trim = false;
  std::vector<CLI::Option*> trim_flags;

  auto add_shared = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value settings file");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    const std::pair<const char*, const char*> shared[] = {
        {"classes", "Comma-separated classes (MAV,eVTOL,Helicopter)"},
        {"frame", "Evaluation frame: camera or world"},
        {"seed", "Seed (u64)"},
        {"jobs", "Worker threads"}};
    for (const auto& [key, help] : shared) {
      bindings.push_back({key, sub->add_option("--" + std::string(key),
                                               flag_values[key], help)});
    }
  };
  auto add_setting = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                         const std::string& help) {
    bindings.push_back({key, sub->add_option(flag, flag_values[key], help)});
  };

  std::vector<std::string> gt_paths, det_paths, track_paths;
  std::string det_path, gt_path, spec_path, manifest_path;

  CLI::App* det = app.add_subcommand("eval-det", "Detection evaluation (ADS)");
  add_shared(det);
  det->add_option("--gt", gt_paths, "Ground-truth sequence file(s)")->required();
  det->add_option("--det", det_paths, "Detection file(s), one per --gt")->required();
  add_setting(det, "--ase-mode", "ase_mode", "Size error: relative or absolute");
  add_setting(det, "--min-iou", "min_iou", "Image-plane IoU for TP errors");
  trim_flags.push_back(det->add_flag("--ap-trim", ap_trim, "Apply recall/precision floor"));

  CLI::App* mot = app.add_subcommand("eval-mot", "Tracking evaluation (CLEAR, IDF1, HOTA)");
  add_shared(mot);
  mot->add_option("--gt", gt_paths, "Ground-truth sequence file(s)")->required();
  mot->add_option("--tracks", track_paths, "Track file(s), one per --gt")->required();

  CLI::App* pose = app.add_subcommand("eval-pose", "6-DoF pose evaluation (ADD, ADD-S)");
  add_shared(pose);
  pose->add_option("--gt", gt_paths, "Ground-truth sequence file(s)")->required();
  pose->add_option("--det", det_paths, "Detection file(s), one per --gt")->required();

  CLI::App* track = app.add_subcommand("track", "Run the 3D tracker on detections");
  add_shared(track);
  track->add_option("--det", det_path, "Detection file")->required();
  track->add_option("--gt", gt_path, "Sequence supplying timestamps and extrinsics");
  add_setting(track, "--max-age", "max_age", "Consecutive misses before deletion");
  add_setting(track, "--min-hits", "min_hits", "Matches before a track is emitted");
  add_setting(track, "--fps", "fps", "Frame rate when no sequence is given");

  CLI::App* predict = app.add_subcommand("predict", "Trajectory prediction (ADE/FDE)");
  add_shared(predict);
  predict->add_option("--gt", gt_paths, "Ground-truth sequence file(s)")->required();
  add_setting(predict, "--history", "history", "Observed frames per window");
  add_setting(predict, "--horizon", "horizon", "Predicted frames per window");

  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic scenario");
  add_shared(simulate);
  simulate->add_option("--spec", spec_path, "Scenario file")->required();

  CLI::App* replay = app.add_subcommand("replay", "Re-run the command in a manifest");
  replay->add_option("manifest", manifest_path, "manifest.txt")->required();
  CLI::Option* replay_out =
      replay->add_option("--out", out_dir, "Output directory override");

  std::vector<const char*> argv = {"laa3d"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (replay->parsed()) {
    std::vector<std::string> replayed = ManifestArgs(manifest_path);
    if (replay_out->count() > 0) {
      std::vector<std::string> rewritten;
      for (size_t i = 0; i < replayed.size(); ++i) {
        if (replayed[i] == "--out" && i + 1 < replayed.size()) {
          ++i;
          continue;
        }
        if (replayed[i].rfind("--out=", 0) == 0) continue;
        rewritten.push_back(replayed[i]);
      }
      rewritten.push_back("--out");
      rewritten.push_back(out_dir);
      replayed = std::move(rewritten);
    }
    return Dispatch(replayed, out, err);
  }

  RunContext ctx;
  ctx.start = std::chrono::steady_clock::now();
  ctx.out = &out;
  ctx.out_dir = out_dir;
  ctx.manifest.args = args;
  ctx.manifest.started_utc = UtcNow();
  if (!config_path.empty()) {
    ctx.ReadInput("config", config_path);
    ctx.settings.LoadFile(config_path);
  }
  bool seed_given = false;
  for (const Binding& b : bindings) {
    if (b.option->count() == 0) continue;
    ctx.settings.Set(b.key, flag_values[b.key], "--" + b.key);
    if (b.key == "seed") seed_given = true;
  }
  for (CLI::Option* f : trim_flags) {
    if (f->count() > 0) ctx.settings.Set("ap_trim", ap_trim ? "true" : "false", "--ap-trim");
  }
  // Validate the shared settings up front so bad values exit as input errors.
  ctx.settings.Config();
  ctx.settings.Classes();
  ctx.settings.Frame();
  ctx.settings.Jobs();
  ctx.settings.Integer<uint64_t>("seed");
  ctx.manifest.settings_dump = ctx.settings.Dump("", " = ");

  int code = kExitOk;
  if (det->parsed()) {
    ctx.manifest.command = "eval-det";
    code = EvalDet(ctx, gt_paths, det_paths);
  } else if (mot->parsed()) {
    ctx.manifest.command = "eval-mot";
    code = EvalMot(ctx, gt_paths, track_paths);
  } else if (pose->parsed()) {
    ctx.manifest.command = "eval-pose";
    code = EvalPose(ctx, gt_paths, det_paths);
  } else if (track->parsed()) {
    ctx.manifest.command = "track";
    code = Track(ctx, det_path, gt_path);
  } else if (predict->parsed()) {
    ctx.manifest.command = "predict";
    code = Predict(ctx, gt_paths);
  } else if (simulate->parsed()) {
    ctx.manifest.command = "simulate";
    code = Simulate(ctx, spec_path, seed_given);
  }
  ctx.Finish();
  return code;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  try {
    return Dispatch(args, out, err);
  } catch (const Error& e) {
    err << "laa3d: " << e.what() << "\n";
    if (IsInputError(e.code())) return kExitInput;
    if (IsPreconditionError(e.code())) return kExitPrecondition;
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "laa3d: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace laa3d::cli
