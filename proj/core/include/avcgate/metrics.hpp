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

// Fixation-prediction metrics: AUC-Judd, SIM, shuffled AUC, CC and NSS.
//
// Conventions shared by every metric here:
//  * CC and SIM compare against a FixationDensity; NSS and both AUC
//    variants compare against the discrete FixationSet.
//  * Means and standard deviations are population statistics (divide by N).
//  * ROC curves place thresholds at the saliency values of fixated pixels,
//    add the (0,0) and (1,1) endpoints and integrate with the trapezoid
//    rule. A non-fixated pixel tied with a threshold counts as a false
//    positive at that threshold, so exact ties earn half credit and a
//    constant map scores 0.5.

#ifndef AVCGATE_METRICS_HPP_
#define AVCGATE_METRICS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "avcgate/grid.hpp"

namespace avcgate {

// Column order follows the usual benchmark tables.
enum class Metric : std::size_t { kAucJudd = 0, kSim, kShuffledAuc, kCc, kNss };

inline constexpr std::size_t kMetricCount = 5;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::kAucJudd, Metric::kSim, Metric::kShuffledAuc, Metric::kCc, Metric::kNss};

std::string_view metric_name(Metric m) noexcept;  // "AUC-J", "SIM", ...
std::optional<Metric> parse_metric(std::string_view name);

double cc(const SaliencyMap& s, const FixationDensity& gt);
double sim(const SaliencyMap& s, const FixationDensity& gt);
double nss(const SaliencyMap& s, const FixationSet& fixations);
double auc_judd(const SaliencyMap& s, const FixationSet& fixations);

// Area under the ROC curve for explicit positive/negative score samples,
// using the threshold convention described at the top of this header.
double roc_area(std::span<const double> positives, std::span<const double> negatives);

inline constexpr std::size_t kDefaultShuffledAucSplits = 100;

// Negatives are drawn, with replacement, from the union of the fixation
// locations in `other_fixations`, minus this frame's own fixations. Each
// split draws |fixations| negatives; the result is the mean split AUC.
double s_auc(const SaliencyMap& s, const FixationSet& fixations,
             std::span<const FixationSet> other_fixations,
             std::size_t splits = kDefaultShuffledAucSplits, std::uint64_t seed = 0);

// Same as above with a precomputed pool of row-major pixel indices. Indices
// that coincide with this frame's fixations are ignored.
double s_auc_with_pool(const SaliencyMap& s, const FixationSet& fixations,
                       std::span<const std::size_t> pool,
                       std::size_t splits = kDefaultShuffledAucSplits,
                       std::uint64_t seed = 0);

struct FrameGroundTruth {
  FixationSet fixations;
  FixationDensity density;
};

using FrameMetrics = std::array<std::optional<double>, kMetricCount>;

struct MetricReport {
  // Frame means per metric; NaN when every frame was skipped for it.
  std::array<double, kMetricCount> mean{};
  std::vector<FrameMetrics> per_frame;
  std::size_t frame_count = 0;
  // Frames where at least one requested metric was degenerate.
  std::size_t skipped_frames = 0;
  std::array<std::size_t, kMetricCount> skipped_per_metric{};

  double value(Metric m) const { return mean[static_cast<std::size_t>(m)]; }
  double auc_j() const { return value(Metric::kAucJudd); }
  double sim() const { return value(Metric::kSim); }
  double s_auc() const { return value(Metric::kShuffledAuc); }
  double cc() const { return value(Metric::kCc); }
  double nss() const { return value(Metric::kNss); }
};

struct EvaluationOptions {
  std::vector<Metric> metrics{kAllMetrics.begin(), kAllMetrics.end()};
  std::size_t s_auc_splits = kDefaultShuffledAucSplits;
  std::uint64_t seed = 0;
  // Frames are scored on this many threads (0 = hardware concurrency).
  // Results are identical for every value.
  std::size_t threads = 1;
};

// Scores each frame and averages. Frames that are degenerate for a metric
// (ZeroVariance, ZeroMass, EmptyFixations, AllFixated, NoNegativePool) are
// skipped for that metric and counted. The shuffled-AUC negative pool for a
// frame is every other frame's fixations in the sequence.
MetricReport evaluate_sequence(std::span<const SaliencyMap> predictions,
                               std::span<const FrameGroundTruth> ground_truth,
                               const EvaluationOptions& options = {});

// Mean of per-group means (e.g. one group per video) instead of frame means.
std::array<double, kMetricCount> group_means(const MetricReport& report,
                                             std::span<const std::size_t> group_of_frame);

}  // namespace avcgate

#endif  // AVCGATE_METRICS_HPP_
