// Copyright 2026 The avcgate Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avcgate/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <string_view>
#include <utility>

#include "avcgate/error.hpp"
#include "avcgate/map_io.hpp"
#include "avcgate/text.hpp"

namespace avcgate {
namespace {

constexpr std::array<std::string_view, 4> kPredictionExtensions = {"pgm", "pnm", "ppm", "fmat"};
constexpr std::size_t kMaxListed = 20;

std::string frame_stem(std::size_t frame) {
  std::string s = std::to_string(frame);
  return std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

std::string listing(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size() && i < kMaxListed; ++i) out += "\n  " + items[i];
  if (items.size() > kMaxListed) {
    out += "\n  ... and " + std::to_string(items.size() - kMaxListed) + " more";
  }
  return out;
}

}  // namespace

std::filesystem::path prediction_path(const std::filesystem::path& pred_dir,
                                      const std::string& video, std::size_t frame,
                                      std::string_view extension) {
  return pred_dir / video / (frame_stem(frame) + "." + std::string(extension));
}

EvaluationRun evaluate_prediction_dir(const std::filesystem::path& pred_dir,
                                      const DatasetManifest& manifest,
                                      const EvaluationOptions& options) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(pred_dir)) {
    throw Error(ErrorCode::kIoError, "prediction directory " + pred_dir.string() + " not found");
  }

  std::vector<std::string> missing;
  std::vector<std::string> ambiguous;
  std::set<fs::path> expected;
  std::vector<std::pair<ScoredFrame, fs::path>> paired;
  for (const VideoEntry& v : manifest.videos) {
    for (std::size_t f = 0; f < v.frame_count; ++f) {
      std::vector<fs::path> found;
      for (std::string_view ext : kPredictionExtensions) {
        fs::path p = prediction_path(pred_dir, v.id, f, ext);
        expected.insert(p.lexically_normal());
        if (fs::is_regular_file(p)) found.push_back(std::move(p));
      }
      if (found.empty()) {
        missing.push_back(v.id + " frame " + std::to_string(f));
      } else if (found.size() > 1) {
        ambiguous.push_back(v.id + " frame " + std::to_string(f));
      } else {
        paired.push_back({{v.id, f}, found.front()});
      }
    }
  }
  std::vector<std::string> stray;
  for (const auto& entry : fs::recursive_directory_iterator(pred_dir)) {
    if (entry.is_regular_file() && !expected.contains(entry.path().lexically_normal())) {
      stray.push_back(fs::relative(entry.path(), pred_dir).generic_string());
    }
  }
  std::sort(stray.begin(), stray.end());
  if (!missing.empty() || !ambiguous.empty() || !stray.empty()) {
    std::string msg = "predictions do not pair 1:1 with ground-truth frames";
    if (!missing.empty()) msg += "\nframes without a prediction:" + listing(missing);
    if (!ambiguous.empty()) msg += "\nframes with several predictions:" + listing(ambiguous);
    if (!stray.empty()) msg += "\nfiles matching no frame:" + listing(stray);
    throw Error(ErrorCode::kPairingError, msg);
  }

  EvaluationRun run;
  std::vector<SaliencyMap> predictions;
  std::vector<FrameGroundTruth> truth;
  BlurOptions blur;
  blur.pixels_per_degree = manifest.pixels_per_degree;
  std::size_t next = 0;
  for (const VideoEntry& v : manifest.videos) {
    if (v.fixations.empty()) {
      throw Error(ErrorCode::kMissingField, "video " + v.id + " has no fixations file");
    }
    const std::vector<FixationSet> fixations =
        read_fixation_csv(manifest.resolve(v.fixations), v.frame_size, v.frame_count);
    for (std::size_t f = 0; f < v.frame_count; ++f, ++next) {
      if (fixations[f].empty()) {
        ++run.frames_without_fixations;
        continue;
      }
      const fs::path& path = paired[next].second;
      SaliencyMap map = read_saliency_map(path);
      if (!(map.size() == v.frame_size)) {
        throw Error(ErrorCode::kShapeMismatch,
                    path.string() + " is " + std::to_string(map.size().width) + "x" +
                        std::to_string(map.size().height) + ", frame is " +
                        std::to_string(v.frame_size.width) + "x" +
                        std::to_string(v.frame_size.height));
      }
      predictions.push_back(std::move(map));
      truth.push_back({fixations[f], density_from_fixations(fixations[f], blur)});
      run.frames.push_back({v.id, f});
    }
  }
  run.report = evaluate_sequence(predictions, truth, options);
  return run;
}

std::string metric_report_csv(const MetricReport& report, std::span<const ScoredFrame> frames) {
  std::string csv = "video,frame";
  for (Metric m : kAllMetrics) csv += "," + std::string(metric_name(m));
  csv += '\n';
  for (std::size_t i = 0; i < report.per_frame.size(); ++i) {
    if (i < frames.size()) {
      csv += frames[i].video + "," + std::to_string(frames[i].frame);
    } else {
      csv += ",";
    }
    for (const auto& v : report.per_frame[i]) csv += "," + (v ? format_double(*v) : std::string());
    csv += '\n';
  }
  csv += "mean,";
  for (double v : report.mean) csv += "," + (std::isnan(v) ? std::string() : format_double(v));
  csv += '\n';
  return csv;
}

std::string format_metric_summary(const MetricReport& report) {
  std::string header;
  std::string values;
  for (Metric m : kAllMetrics) {
    const std::string name(metric_name(m));
    const double v = report.value(m);
    std::string cell = std::isnan(v) ? "-" : format_fixed(v, 4);
    const std::size_t width = std::max(name.size(), cell.size());
    header += std::string(width - name.size() + 2, ' ') + name;
    values += std::string(width - cell.size() + 2, ' ') + cell;
  }
  std::string out = "frames" + header + "\n" + std::string(6 - std::min<std::size_t>(6, std::to_string(report.frame_count).size()), ' ') +
                    std::to_string(report.frame_count) + values + "\n";
  if (report.skipped_frames > 0) {
    out += "frames with a degenerate metric: " + std::to_string(report.skipped_frames) + "\n";
  }
  return out;
}

}  // namespace avcgate
