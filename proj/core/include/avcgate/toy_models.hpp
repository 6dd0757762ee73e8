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

// Desk-scale stand-ins for the deep components: a contrast + center-bias
// visual saliency predictor, a three-feature logistic consistency
// classifier, and the training losses.

#ifndef AVCGATE_TOY_MODELS_HPP_
#define AVCGATE_TOY_MODELS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <string>
#include <vector>

#include "avcgate/audio.hpp"
#include "avcgate/fusion.hpp"
#include "avcgate/grid.hpp"

namespace avcgate {

struct VisualSaliencyOptions {
  // (center sigma, surround sigma) pairs in pixels.
  std::array<std::pair<double, double>, 3> scales{{{1.0, 3.0}, {2.0, 6.0}, {3.0, 9.0}}};
  double contrast_weight = 0.7;
  double prior_weight = 0.3;
  double prior_sigma_fraction = 0.25;  // of min(height, width)
};

// Isotropic Gaussian centered in the frame, peak 1.
Grid center_bias_prior(std::size_t width, std::size_t height, double sigma_fraction = 0.25);

// Center-surround contrast at three scales blended with the center prior,
// scaled to max 1. Throws TooSmall below 8x8.
SaliencyMap predict_visual_saliency(const Grid& frame, const VisualSaliencyOptions& options = {});

// Mean absolute difference between two frames of equal size.
double motion_energy(const Grid& previous, const Grid& current);

struct AvcFeature {
  double audio_energy_corr = 0.0;  // Pearson(audio envelope, global motion envelope)
  double embed_cos = 0.0;          // cosine of centered audio / salient-region motion envelopes
  double onset_coincidence = 0.0;  // share of audio onsets matched by a motion onset (+-1 step)

  std::array<double, 3> as_array() const {
    return {audio_energy_corr, embed_cos, onset_coincidence};
  }
};

inline constexpr std::size_t kAvcFeatureCount = 3;

// Linear band energy of each mel row, averaged into `points` equal segments.
std::vector<double> audio_energy_envelope(const MelSpectrogram& mel, std::size_t points);

// `frames` holds n + 1 consecutive frames spanning the same interval as
// `mel_slice`; the n inter-frame motion values are compared against the
// slice's energy envelope split into n segments. Throws ShapeMismatch when
// fewer than two frames are given, frame sizes differ, or the slice has
// fewer rows than motion steps.
AvcFeature extract_avc_features(const MelSpectrogram& mel_slice, std::span<const Grid> frames);

struct LabeledFeature {
  AvcFeature feature;
  int label = 0;
};

// Logistic model: score = sigmoid(w . x + b).
struct AvcClassifier {
  std::array<double, kAvcFeatureCount> weights{};
  double bias = 0.0;

  double logit(const AvcFeature& f) const;
  double score(const AvcFeature& f) const;
};

// Parameter vector layout: weights then bias.
using ClassifierParams = std::array<double, kAvcFeatureCount + 1>;

ClassifierParams to_params(const AvcClassifier& clf);
AvcClassifier from_params(const ClassifierParams& params);

inline constexpr double kCrossEntropyEps = 1e-7;

double sigmoid(double z) noexcept;

// -(y ln s + (1 - y) ln(1 - s)) with s clamped to [1e-7, 1 - 1e-7].
double cross_entropy_loss(double score, int label);

// Mean cross-entropy of the classifier over `data`, and its analytic
// gradient with respect to the parameters.
double classifier_loss(const ClassifierParams& params, std::span<const LabeledFeature> data);
ClassifierParams classifier_gradient(const ClassifierParams& params,
                                     std::span<const LabeledFeature> data);

struct TrainOptions {
  std::size_t epochs = 500;
  double learning_rate = 0.5;
  std::uint64_t seed = 0;
};

struct TrainingLogEntry {
  std::size_t epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

struct TrainingResult {
  AvcClassifier classifier;
  double train_accuracy = 0.0;
  std::vector<TrainingLogEntry> log;  // one entry per epoch, after the update
};

double classifier_accuracy(const AvcClassifier& clf, std::span<const LabeledFeature> data,
                           double threshold = kDefaultGateThreshold);

// Full-batch gradient descent from a small seeded initialization. Throws
// SingleClass when only one label is present and Diverged when the loss
// or parameters stop being finite.
TrainingResult train_avc_classifier(std::span<const LabeledFeature> data,
                                    const TrainOptions& options = {});

// Sigmoid score binarized with the >= rule; source = predicted.
GateDecision predict_avc(const AvcClassifier& clf, const AvcFeature& f,
                         double threshold = kDefaultGateThreshold);

// Uniform features labelled by the plane corr + cos = 0, keeping only
// points at least `margin` away from it.
std::vector<LabeledFeature> synthesize_separable_features(std::size_t n, double margin,
                                                          std::uint64_t seed);

void write_classifier_csv(const std::filesystem::path& path, const AvcClassifier& clf);
AvcClassifier read_classifier_csv(const std::filesystem::path& path);
void write_training_log_csv(const std::filesystem::path& path,
                            std::span<const TrainingLogEntry> log);

inline constexpr double kKlEps = 1e-8;

// KL(gt || pred). Both maps are scaled to unit mass, then eps is added to
// every cell and they are renormalized. Never negative. Throws ZeroMass for
// an all-zero prediction.
double kl_loss(const SaliencyMap& pred, const FixationDensity& gt, double eps = kKlEps);

struct LossConfig {
  double rho = 0.5;
};

// (1 - rho) * l_cls + rho * l_avsd.
double combined_loss(double l_cls, double l_avsd, const LossConfig& config = {});

}  // namespace avcgate

#endif  // AVCGATE_TOY_MODELS_HPP_
