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

#include "avcgate/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <string>
#include <thread>

#include "avcgate/error.hpp"
#include "avcgate/random.hpp"

namespace avcgate {
namespace {

void require_same_size(FrameSize a, FrameSize b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": " + std::to_string(a.width) + "x" +
                    std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
                    std::to_string(b.height));
  }
}

void require_fixations(const SaliencyMap& s, const FixationSet& fixations) {
  if (fixations.empty()) throw Error(ErrorCode::kEmptyFixations, "no fixations");
  require_same_size(s.size(), fixations.frame_size(), "fixation frame size");
}

bool is_constant(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo == *hi;
}

double mean_of(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / static_cast<double>(v.size());
}

double population_variance(std::span<const double> v, double mean) {
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size());
}

}  // namespace

std::string_view metric_name(Metric m) noexcept {
  switch (m) {
    case Metric::kAucJudd: return "AUC-J";
    case Metric::kSim: return "SIM";
    case Metric::kShuffledAuc: return "s-AUC";
    case Metric::kCc: return "CC";
    case Metric::kNss: return "NSS";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "auc-j" || lower == "auc_j" || lower == "aucj" || lower == "auc_judd") {
    return Metric::kAucJudd;
  }
  if (lower == "sim") return Metric::kSim;
  if (lower == "s-auc" || lower == "s_auc" || lower == "sauc") return Metric::kShuffledAuc;
  if (lower == "cc") return Metric::kCc;
  if (lower == "nss") return Metric::kNss;
  return std::nullopt;
}

double cc(const SaliencyMap& s, const FixationDensity& gt) {
  require_same_size(s.size(), gt.size(), "cc");
  const auto a = s.values();
  const auto b = gt.values();
  if (is_constant(a) || is_constant(b)) {
    throw Error(ErrorCode::kZeroVariance, "cc needs two non-constant maps");
  }
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  // The 1/N factors cancel.
  const double r = cov / std::sqrt(va * vb);
  return std::clamp(r, -1.0, 1.0);
}

double sim(const SaliencyMap& s, const FixationDensity& gt) {
  require_same_size(s.size(), gt.size(), "sim");
  const double s_mass = s.grid().sum();
  const double g_mass = gt.grid().sum();
  if (!(s_mass > 0.0) || !(g_mass > 0.0)) {
    throw Error(ErrorCode::kZeroMass, "sim needs positive mass in both maps");
  }
  const auto a = s.values();
  const auto b = gt.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += std::min(a[i] / s_mass, b[i] / g_mass);
  }
  return std::clamp(acc, 0.0, 1.0);
}

double nss(const SaliencyMap& s, const FixationSet& fixations) {
  require_fixations(s, fixations);
  const auto v = s.values();
  if (is_constant(v)) throw Error(ErrorCode::kZeroVariance, "nss on a constant map");
  const double mu = mean_of(v);
  const double sigma = std::sqrt(population_variance(v, mu));
  double acc = 0.0;
  for (const Point& p : fixations.points()) acc += (s.at(p.x, p.y) - mu) / sigma;
  return acc / static_cast<double>(fixations.size());
}

double roc_area(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty()) throw Error(ErrorCode::kEmptyFixations, "no positive samples");
  if (negatives.empty()) throw Error(ErrorCode::kAllFixated, "no negative samples");

  std::vector<double> thresholds(positives.begin(), positives.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<double> pos(positives.begin(), positives.end());
  std::vector<double> neg(negatives.begin(), negatives.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  const auto n_pos = static_cast<double>(pos.size());
  const auto n_neg = static_cast<double>(neg.size());
  const auto at_or_above = [](const std::vector<double>& sorted, double t) {
    return static_cast<double>(sorted.end() -
                               std::lower_bound(sorted.begin(), sorted.end(), t));
  };

  double area = 0.0;
  double prev_tpr = 0.0;
  double prev_fpr = 0.0;
  for (double t : thresholds) {
    const double tpr = at_or_above(pos, t) / n_pos;
    const double fpr = at_or_above(neg, t) / n_neg;
    area += (fpr - prev_fpr) * (tpr + prev_tpr) * 0.5;
    prev_tpr = tpr;
    prev_fpr = fpr;
  }
  area += (1.0 - prev_fpr) * (1.0 + prev_tpr) * 0.5;
  return area;
}

double auc_judd(const SaliencyMap& s, const FixationSet& fixations) {
  require_fixations(s, fixations);
  const auto values = s.values();
  const std::vector<std::size_t> fixated = fixations.linear_indices();
  if (fixated.size() == values.size()) {
    throw Error(ErrorCode::kAllFixated, "every pixel is fixated");
  }
  std::vector<double> positives;
  std::vector<double> negatives;
  positives.reserve(fixated.size());
  negatives.reserve(values.size() - fixated.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (next < fixated.size() && fixated[next] == i) {
      positives.push_back(values[i]);
      ++next;
    } else {
      negatives.push_back(values[i]);
    }
  }
  return roc_area(positives, negatives);
}

double s_auc_with_pool(const SaliencyMap& s, const FixationSet& fixations,
                       std::span<const std::size_t> pool, std::size_t splits,
                       std::uint64_t seed) {
  require_fixations(s, fixations);
  if (splits == 0) throw Error(ErrorCode::kInvalidArgument, "s_auc needs splits >= 1");
  const std::vector<std::size_t> own = fixations.linear_indices();
  const std::size_t area = s.values().size();

  std::vector<std::size_t> candidates;
  candidates.reserve(pool.size());
  for (std::size_t idx : pool) {
    if (idx >= area) {
      throw Error(ErrorCode::kShapeMismatch, "negative pool index outside the frame");
    }
    if (!std::binary_search(own.begin(), own.end(), idx)) candidates.push_back(idx);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.empty()) {
    throw Error(ErrorCode::kNoNegativePool, "no negative locations outside this frame's fixations");
  }

  const auto values = s.values();
  std::vector<double> positives;
  positives.reserve(own.size());
  for (std::size_t idx : own) positives.push_back(values[idx]);

  Rng rng(seed);
  std::vector<double> negatives(own.size());
  double total = 0.0;
  for (std::size_t split = 0; split < splits; ++split) {
    for (double& n : negatives) n = values[candidates[rng.index(candidates.size())]];
    total += roc_area(positives, negatives);
  }
  return total / static_cast<double>(splits);
}

double s_auc(const SaliencyMap& s, const FixationSet& fixations,
             std::span<const FixationSet> other_fixations, std::size_t splits,
             std::uint64_t seed) {
  std::vector<std::size_t> pool;
  for (const FixationSet& other : other_fixations) {
    require_same_size(s.size(), other.frame_size(), "s_auc other fixations");
    const auto idx = other.linear_indices();
    pool.insert(pool.end(), idx.begin(), idx.end());
  }
  if (pool.empty()) throw Error(ErrorCode::kNoNegativePool, "other frames carry no fixations");
  return s_auc_with_pool(s, fixations, pool, splits, seed);
}

namespace {

bool is_degenerate(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVariance:
    case ErrorCode::kZeroMass:
    case ErrorCode::kEmptyFixations:
    case ErrorCode::kAllFixated:
    case ErrorCode::kNoNegativePool:
      return true;
    default:
      return false;
  }
}

}  // namespace

MetricReport evaluate_sequence(std::span<const SaliencyMap> predictions,
                               std::span<const FrameGroundTruth> ground_truth,
                               const EvaluationOptions& options) {
  if (predictions.size() != ground_truth.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(predictions.size()) + " predictions for " +
                    std::to_string(ground_truth.size()) + " ground-truth frames");
  }
  const std::size_t n = predictions.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (predictions[i].size() != ground_truth[i].fixations.frame_size() ||
        predictions[i].size() != ground_truth[i].density.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "frame " + std::to_string(i) + ": prediction and ground truth differ in size");
    }
  }

  bool want[kMetricCount] = {};
  for (Metric m : options.metrics) want[static_cast<std::size_t>(m)] = true;

  // Fixation counts per pixel over the whole sequence, one grid per frame
  // size, so each frame's shuffled-AUC pool is "everyone else's fixations".
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> counts;
  if (want[static_cast<std::size_t>(Metric::kShuffledAuc)]) {
    for (const FrameGroundTruth& gt : ground_truth) {
      const FrameSize fs = gt.fixations.frame_size();
      auto& grid = counts[{fs.width, fs.height}];
      grid.resize(fs.area(), 0);
      for (std::size_t idx : gt.fixations.linear_indices()) ++grid[idx];
    }
  }

  MetricReport report;
  report.frame_count = n;
  report.per_frame.resize(n);
  std::vector<std::uint8_t> frame_skipped(n, 0);
  std::vector<std::exception_ptr> failures(n);

  const auto score_frame = [&](std::size_t i) {
    const SaliencyMap& s = predictions[i];
    const FrameGroundTruth& gt = ground_truth[i];
    FrameMetrics& row = report.per_frame[i];
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      if (!want[m]) continue;
      try {
        switch (static_cast<Metric>(m)) {
          case Metric::kAucJudd: row[m] = auc_judd(s, gt.fixations); break;
          case Metric::kSim: row[m] = sim(s, gt.density); break;
          case Metric::kCc: row[m] = cc(s, gt.density); break;
          case Metric::kNss: row[m] = nss(s, gt.fixations); break;
          case Metric::kShuffledAuc: {
            const FrameSize fs = gt.fixations.frame_size();
            const auto& grid = counts.at({fs.width, fs.height});
            const auto own = gt.fixations.linear_indices();
            std::vector<std::size_t> pool;
            for (std::size_t idx = 0; idx < grid.size(); ++idx) {
              const bool mine = std::binary_search(own.begin(), own.end(), idx);
              if (grid[idx] > (mine ? 1u : 0u)) pool.push_back(idx);
            }
            row[m] = s_auc_with_pool(s, gt.fixations, pool, options.s_auc_splits,
                                     derive_seed(options.seed, i));
            break;
          }
        }
      } catch (const Error& e) {
        if (!is_degenerate(e.code())) throw;
        frame_skipped[i] = 1;
      }
    }
  };
  const auto score_range = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      try {
        score_frame(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  std::size_t workers = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    score_range(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(score_range, w, workers);
    for (std::thread& t : pool) t.join();
  }
  for (const std::exception_ptr& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  // Reduce in frame order so the result does not depend on scheduling.
  std::array<double, kMetricCount> sums{};
  std::array<std::size_t, kMetricCount> used{};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < kMetricCount; ++m) {
      if (!want[m]) continue;
      if (report.per_frame[i][m]) {
        sums[m] += *report.per_frame[i][m];
        ++used[m];
      } else {
        ++report.skipped_per_metric[m];
      }
    }
    if (frame_skipped[i]) ++report.skipped_frames;
  }

  for (std::size_t m = 0; m < kMetricCount; ++m) {
    report.mean[m] = used[m] > 0 ? sums[m] / static_cast<double>(used[m])
                                 : std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::array<double, kMetricCount> group_means(const MetricReport& report,
                                             std::span<const std::size_t> group_of_frame) {
  if (group_of_frame.size() != report.per_frame.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one group id per frame required");
  }
  std::array<double, kMetricCount> out{};
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    std::map<std::size_t, std::pair<double, std::size_t>> per_group;
    for (std::size_t i = 0; i < group_of_frame.size(); ++i) {
      if (!report.per_frame[i][m]) continue;
      auto& [sum, count] = per_group[group_of_frame[i]];
      sum += *report.per_frame[i][m];
      ++count;
    }
    if (per_group.empty()) {
      out[m] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double acc = 0.0;
    for (const auto& [group, sc] : per_group) acc += sc.first / static_cast<double>(sc.second);
    out[m] = acc / static_cast<double>(per_group.size());
  }
  return out;
}

}  // namespace avcgate
