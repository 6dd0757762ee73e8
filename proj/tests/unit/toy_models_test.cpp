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

#include "avcgate/toy_models.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "avcgate/error.hpp"
#include "avcgate/experiment.hpp"
#include "avcgate/synth.hpp"
#include "oracles.hpp"

namespace avcgate {
namespace {

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an avcgate::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(VisualSaliency, UniformFrameGivesPurePrior) {
  const Grid frame(16, 12, 0.4);
  const SaliencyMap s = predict_visual_saliency(frame);
  const Grid prior = center_bias_prior(16, 12);
  const double scale = s.values()[0] / prior[0];
  for (std::size_t i = 0; i < prior.area(); ++i) EXPECT_NEAR(s.values()[i], scale * prior[i], 1e-12);
}

TEST(VisualSaliency, BrightSquareHoldsTheArgmax) {
  Grid frame(16, 16, 0.05);
  for (std::size_t y = 6; y < 10; ++y) {
    for (std::size_t x = 6; x < 10; ++x) frame.at(x, y) = 1.0;
  }
  const SaliencyMap s = predict_visual_saliency(frame);
  const auto v = s.values();
  const auto best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  const std::size_t x = best % 16;
  const std::size_t y = best / 16;
  EXPECT_TRUE(x >= 6 && x < 10 && y >= 6 && y < 10) << x << "," << y;
}

TEST(VisualSaliency, OffCenterSquareStillWins) {
  Grid frame(24, 24, 0.0);
  for (std::size_t y = 2; y < 5; ++y) {
    for (std::size_t x = 17; x < 20; ++x) frame.at(x, y) = 1.0;
  }
  const SaliencyMap s = predict_visual_saliency(frame);
  const auto v = s.values();
  const auto best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  EXPECT_GE(best % 24, 16u);
  EXPECT_LE(best / 24, 5u);
}

TEST(VisualSaliency, OutputInUnitInterval) {
  std::mt19937_64 rng(1);
  const Grid frame(20, 14, oracle::random_values(rng, 280));
  const SaliencyMap s = predict_visual_saliency(frame);
  for (double x : s.values()) {
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, 1.0);
  }
  EXPECT_DOUBLE_EQ(*std::max_element(s.values().begin(), s.values().end()), 1.0);
}

TEST(VisualSaliency, TinyFrameIsRejected) {
  EXPECT_EQ(code_of([] { predict_visual_saliency(Grid(4, 4)); }), ErrorCode::kTooSmall);
}

TEST(MotionEnergy, MeanAbsoluteDifference) {
  EXPECT_DOUBLE_EQ(motion_energy(Grid(2, 1, {0.0, 1.0}), Grid(2, 1, {0.5, 0.0})), 0.75);
}

MelSpectrogram silent_mel(std::size_t frames, std::size_t bands) {
  MelSpectrogram mel;
  mel.frames = frames;
  mel.n_mels = bands;
  mel.silence_value = std::log(kDefaultLogFloor);
  mel.values.assign(frames * bands, mel.silence_value);
  return mel;
}

TEST(AvcFeatures, SilentStaticInputHasNoOnsets) {
  const std::vector<Grid> frames(10, Grid(8, 8, 0.3));
  const AvcFeature f = extract_avc_features(silent_mel(40, 8), frames);
  EXPECT_EQ(f.onset_coincidence, 0.0);
  EXPECT_EQ(f.audio_energy_corr, 0.0);
  EXPECT_EQ(f.embed_cos, 0.0);
}

TEST(AvcFeatures, OnScreenSoundingClipIsCorrelated) {
  // With no distractors the only motion is the sounding target, so the audio
  // and visual energy envelopes are the same signal.
  SynthOptions options;
  options.distractors = 0;
  const SyntheticClip synth = synthesize_clip(Scenario::kOnScreenSounding, 80, 5, options);
  const ClipData clip = clip_from_synthetic(synth, "on");
  const std::size_t k = context_frames(clip.fps, 1.0);
  for (std::size_t frame = k; frame < 80; frame += 5) {
    const AvcFeature f = frame_features(clip, frame, k);
    EXPECT_GE(f.audio_energy_corr, 0.9) << "frame " << frame;
  }
}

TEST(AvcFeatures, MatchingEnvelopesCorrelatePerfectly) {
  // Motion step k moves a single pixel by k % 3 + 1 levels; the audio energy
  // follows the same pattern.
  const std::size_t steps = 12;
  std::vector<Grid> frames{Grid(8, 8, 0.0)};
  MelSpectrogram mel;
  mel.frames = steps;
  mel.n_mels = 1;
  mel.log_compressed = false;
  for (std::size_t k = 0; k < steps; ++k) {
    const double amount = static_cast<double>(k % 3 + 1);
    Grid next = frames.back();
    next.at(3, 3) += amount;
    frames.push_back(next);
    mel.values.push_back(amount);
  }
  const AvcFeature f = extract_avc_features(mel, frames);
  EXPECT_NEAR(f.audio_energy_corr, 1.0, 1e-12);
  EXPECT_NEAR(f.embed_cos, 1.0, 1e-12);
}

TEST(AvcFeatures, Deterministic) {
  const SyntheticClip synth = synthesize_clip(Scenario::kBackgroundMusic, 40, 3);
  const ClipData clip = clip_from_synthetic(synth, "m");
  const AvcFeature a = frame_features(clip, 30, 25);
  const AvcFeature b = frame_features(clip, 30, 25);
  EXPECT_EQ(a.as_array(), b.as_array());
}

TEST(AvcFeatures, NeedTwoFrames) {
  const std::vector<Grid> frames(1, Grid(8, 8));
  EXPECT_EQ(code_of([&] { extract_avc_features(silent_mel(4, 2), frames); }),
            ErrorCode::kShapeMismatch);
}

TEST(Classifier, SeparableSetIsLearned) {
  const auto data = synthesize_separable_features(400, 0.5, 11);
  const TrainingResult r = train_avc_classifier(data);
  EXPECT_GE(r.train_accuracy, 0.95);
  EXPECT_GE(classifier_accuracy(r.classifier, synthesize_separable_features(200, 0.5, 12)), 0.95);
}

TEST(Classifier, FlippedLabelsFlipTheDecision) {
  auto data = synthesize_separable_features(300, 0.5, 13);
  const TrainingResult r = train_avc_classifier(data);
  for (auto& d : data) d.label = 1 - d.label;
  const TrainingResult flipped = train_avc_classifier(data);
  EXPECT_NEAR(flipped.train_accuracy, r.train_accuracy, 0.02);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_LT(r.classifier.weights[i] * flipped.classifier.weights[i], 0.0);
  }
}

TEST(Classifier, GradientMatchesFiniteDifferences) {
  const auto data = synthesize_separable_features(50, 0.1, 14);
  const ClassifierParams p{0.3, -0.7, 0.2, 0.1};
  const ClassifierParams g = classifier_gradient(p, data);
  const double h = 1e-6;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ClassifierParams up = p;
    ClassifierParams down = p;
    up[i] += h;
    down[i] -= h;
    const double numeric = (classifier_loss(up, data) - classifier_loss(down, data)) / (2 * h);
    EXPECT_NEAR(g[i], numeric, 1e-6) << i;
  }
}

TEST(Classifier, SmallStepsNeverRaiseTheLoss) {
  const auto data = synthesize_separable_features(120, 0.2, 15);
  TrainOptions opt;
  opt.learning_rate = 0.01;
  opt.epochs = 200;
  const TrainingResult r = train_avc_classifier(data, opt);
  ASSERT_EQ(r.log.size(), 200u);
  for (std::size_t i = 1; i < r.log.size(); ++i) EXPECT_LE(r.log[i].loss, r.log[i - 1].loss + 1e-15);
}

TEST(Classifier, SingleClassDataIsRejected) {
  auto data = synthesize_separable_features(20, 0.5, 16);
  for (auto& d : data) d.label = 1;
  EXPECT_EQ(code_of([&] { train_avc_classifier(data); }), ErrorCode::kSingleClass);
}

TEST(Classifier, ScoreThresholds) {
  AvcClassifier clf;
  clf.bias = std::log(0.7 / 0.3);
  EXPECT_NEAR(clf.score({}), 0.7, 1e-12);
  EXPECT_EQ(predict_avc(clf, {}).lc(), 1);
  EXPECT_EQ(predict_avc(clf, {}, 0.8).lc(), 0);
  EXPECT_EQ(predict_avc(clf, {}).source(), GateSource::kPredicted);
  AvcClassifier zero;
  EXPECT_EQ(zero.score({0.9, -0.4, 0.3}), 0.5);
  EXPECT_EQ(predict_avc(zero, {0.9, -0.4, 0.3}).lc(), 1);
}

TEST(Classifier, CsvRoundTrip) {
  const auto dir = oracle::scratch_dir("clf");
  AvcClassifier clf;
  clf.weights = {1.25, -0.5, 3.0e-7};
  clf.bias = -2.0 / 3.0;
  write_classifier_csv(dir / "c.csv", clf);
  const AvcClassifier back = read_classifier_csv(dir / "c.csv");
  EXPECT_EQ(back.weights, clf.weights);
  EXPECT_EQ(back.bias, clf.bias);
  std::filesystem::remove_all(dir);
}

TEST(KlLoss, HandComputedPair) {
  const SaliencyMap pred(2, 1, {0.25, 0.75});
  const FixationDensity gt = normalize_density(SaliencyMap(2, 1, {0.5, 0.5}));
  const double expected = 0.5 * std::log(2.0) + 0.5 * std::log(2.0 / 3.0);
  EXPECT_NEAR(kl_loss(pred, gt, 1e-15), expected, 1e-9);
  EXPECT_NEAR(expected, 0.143841036, 1e-9);
}

TEST(KlLoss, ZeroForIdenticalAndNonNegative) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = oracle::random_values(rng, 12, 0.0, 1.0);
    const auto q = oracle::random_values(rng, 12, 0.01, 1.0);
    const SaliencyMap s(4, 3, p);
    EXPECT_NEAR(kl_loss(s, normalize_density(s)), 0.0, 1e-9);
    EXPECT_GE(kl_loss(s, normalize_density(SaliencyMap(4, 3, q))), 0.0);
  }
}

TEST(KlLoss, InvariantToPredictionScale) {
  const SaliencyMap a(3, 1, {0.2, 0.3, 0.5});
  const SaliencyMap b(3, 1, {2.0, 3.0, 5.0});
  const FixationDensity gt = normalize_density(SaliencyMap(3, 1, {0.1, 0.6, 0.3}));
  EXPECT_NEAR(kl_loss(a, gt, 1e-15), kl_loss(b, gt, 1e-15), 1e-12);
}

TEST(CrossEntropy, KnownValues) {
  EXPECT_NEAR(cross_entropy_loss(0.5, 0), std::log(2.0), 1e-12);
  EXPECT_NEAR(cross_entropy_loss(0.5, 1), 0.693147, 1e-6);
  EXPECT_NEAR(cross_entropy_loss(1.0 - 1e-9, 1), 0.0, 1e-6);
  EXPECT_TRUE(std::isfinite(cross_entropy_loss(0.0, 1)));
  EXPECT_EQ(code_of([] { cross_entropy_loss(0.5, 2); }), ErrorCode::kInvalidLabel);
}

TEST(CrossEntropy, DecreasesTowardTheLabel) {
  double last = cross_entropy_loss(0.05, 1);
  for (double s = 0.1; s < 1.0; s += 0.05) {
    const double now = cross_entropy_loss(s, 1);
    EXPECT_LT(now, last);
    last = now;
  }
}

TEST(CombinedLoss, WeightedSum) {
  EXPECT_DOUBLE_EQ(combined_loss(2.0, 4.0), 3.0);
  EXPECT_DOUBLE_EQ(combined_loss(2.0, 4.0, {1.0}), 4.0);
  EXPECT_DOUBLE_EQ(combined_loss(2.0, 4.0, {0.0}), 2.0);
  EXPECT_EQ(LossConfig{}.rho, 0.5);
  EXPECT_EQ(code_of([] { combined_loss(1.0, 1.0, {1.5}); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace avcgate
