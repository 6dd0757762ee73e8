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

// Four-way gating ablation on toy saliency decoders.
//
// Each clip is reduced to per-frame visual context tensors (K channels of
// absolute frame differences around the frame, K = fps * context seconds)
// and audio context vectors (the slice's energy envelope in K segments).
// A fixed, training-free decoder turns them into saliency maps: the
// visual-only branch blends static contrast saliency with overall motion,
// the fused branch adds the motion that co-varies with the audio. Fusion
// therefore helps exactly when the sound comes from a moving on-screen
// object.

#ifndef AVCGATE_EXPERIMENT_HPP_
#define AVCGATE_EXPERIMENT_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avcgate/audio.hpp"
#include "avcgate/dataset.hpp"
#include "avcgate/fusion.hpp"
#include "avcgate/grid.hpp"
#include "avcgate/metrics.hpp"
#include "avcgate/synth.hpp"
#include "avcgate/toy_models.hpp"

namespace avcgate {

enum class FusionScheme : std::uint8_t { kConcat, kSpatialAlign, kBilinear };

std::string_view fusion_scheme_name(FusionScheme s) noexcept;
// Throws ConfigError for unknown names.
FusionScheme parse_fusion_scheme(std::string_view name);

enum class GateMode : std::uint8_t { kVOnly, kAlwaysFuse, kGatedPredicted, kGatedIdeal };

inline constexpr std::size_t kGateModeCount = 4;
inline constexpr std::array<GateMode, kGateModeCount> kAllGateModes = {
    GateMode::kVOnly, GateMode::kAlwaysFuse, GateMode::kGatedPredicted, GateMode::kGatedIdeal};

std::string_view gate_mode_name(GateMode m) noexcept;
GateMode parse_gate_mode(std::string_view name);

// Everything the experiment needs from one video.
struct ClipData {
  std::string id;
  double fps = 25.0;
  std::vector<Grid> frames;
  std::vector<MelSlice> audio;  // one slice per frame
  std::vector<FrameGroundTruth> ground_truth;
  std::vector<int> avc_labels;
};

struct ClipOptions {
  MelOptions mel;
  FrameAlignOptions align;
  BlurOptions blur{2.0, 1.0};
};

ClipData clip_from_synthetic(const SyntheticClip& clip, std::string id,
                             const ClipOptions& options = {});

// Loads every video of a manifest through InstanceStream. Frames without
// fixations are rejected with MissingField since the ablation scores every
// frame.
std::vector<ClipData> load_clips(const DatasetManifest& manifest, const ClipOptions& options = {});

struct ExperimentConfig {
  FusionScheme scheme = FusionScheme::kConcat;
  bool residual = false;
  double audio_gain = 1.0;
  double fusion_weight = 0.8;  // share of the audio-guided modulation in the fused output
  double context_seconds = 1.0;
  double train_fraction = 0.7;
  double gate_threshold = kDefaultGateThreshold;
  TrainOptions train;
  // When set, training is skipped and this classifier gates every test frame.
  // A training split with a single label yields a constant classifier.
  std::optional<AvcClassifier> classifier;
  EvaluationOptions evaluation;
  std::uint64_t seed = 0;
};

// Throws ConfigError naming the offending field.
void validate_config(const ExperimentConfig& config);

// K for a clip's frame rate.
std::size_t context_frames(double fps, double context_seconds);

// Frame the context window of `frame` is centered on. Windows are shifted
// to stay inside clips of at least k + 1 frames.
std::size_t context_anchor(std::size_t frame, std::size_t k, std::size_t n_frames);

// Context tensors and features for frame i of a clip.
FeatureTensor visual_context(const ClipData& clip, std::size_t frame, std::size_t k);
FeatureVector audio_context(const MelSlice& slice, std::size_t k, double gain);
AvcFeature frame_features(const ClipData& clip, std::size_t frame, std::size_t k);

// The toy decoder. `frames` supplies the still image behind each frame
// index passed to the returned callable.
SaliencyDecoder make_toy_decoder(std::vector<const Grid*> frames, const ExperimentConfig& config);

struct AblationRow {
  GateMode mode = GateMode::kVOnly;
  std::array<double, kMetricCount> mean{};
  std::array<double, kMetricCount> delta{};  // mean - v_only mean

  double value(Metric m) const { return mean[static_cast<std::size_t>(m)]; }
};

struct AblationTable {
  std::array<AblationRow, kGateModeCount> rows{};
  std::vector<Metric> metrics;
  double classifier_accuracy = 0.0;  // on test frames, against Lc
  double train_accuracy = 0.0;
  std::size_t train_clips = 0;
  std::size_t test_clips = 0;
  std::size_t test_frames = 0;

  const AblationRow& row(GateMode m) const { return rows[static_cast<std::size_t>(m)]; }
};

struct ExperimentResult {
  AblationTable table;
  AvcClassifier classifier;
  std::vector<TrainingLogEntry> training_log;
  std::vector<std::size_t> train_clip_indices;
  std::vector<std::size_t> test_clip_indices;
  // Per test frame, in test-clip order.
  std::vector<std::string> frame_video;
  std::vector<std::size_t> frame_index;
  std::vector<GateDecision> predicted;
  std::vector<GateDecision> ideal;
  std::array<std::vector<SaliencyMap>, kGateModeCount> streams;
};

// Seeded per-clip split, stratified by `strata` (one value per clip); at
// least one clip lands on each side.
void split_clips(std::span<const int> strata, double train_fraction, std::uint64_t seed,
                 std::vector<std::size_t>& train, std::vector<std::size_t>& test);

// Trains the AVC classifier once on the training clips, then runs all four
// gate modes on identical test inputs.
ExperimentResult run_gate_experiment(std::span<const ClipData> clips,
                                     const ExperimentConfig& config);

struct SweepPoint {
  double target_accuracy = 0.0;
  double achieved_accuracy = 0.0;
  std::array<double, kMetricCount> mean{};
};

// Gated output under a simulated classifier of the given accuracy: exactly
// round((1 - acc) * N) test-frame labels are flipped, taken from one seeded
// permutation so lower accuracies flip a superset of frames.
std::vector<SweepPoint> sweep_gate_accuracy(const ExperimentResult& result,
                                            std::span<const ClipData> clips,
                                            std::span<const double> accuracies,
                                            const ExperimentConfig& config);

std::string format_ablation_table(const AblationTable& table);
void write_ablation_csv(const std::filesystem::path& path, const AblationTable& table);
std::string format_sweep_table(std::span<const SweepPoint> sweep);
void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepPoint> sweep);

}  // namespace avcgate

#endif  // AVCGATE_EXPERIMENT_HPP_
