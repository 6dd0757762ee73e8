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

// Randomized property checks over many generated instances.

#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "avcgate/audio.hpp"
#include "avcgate/error.hpp"
#include "avcgate/fusion.hpp"
#include "avcgate/metrics.hpp"
#include "avcgate/toy_models.hpp"
#include "oracles.hpp"

namespace avcgate {
namespace {

constexpr int kInstances = 1000;

struct Instance {
  FrameSize size;
  std::vector<double> values;
  std::vector<Point> points;
};

// Random map of at most max_side x max_side with 1..max_fix fixations, leaving
// at least one pixel unfixated. Values are drawn from a small set so that ties
// occur regularly.
Instance random_instance(std::mt19937_64& rng, std::size_t max_side, std::size_t max_fix) {
  std::uniform_int_distribution<std::size_t> side(1, max_side);
  Instance in;
  do {
    in.size = {side(rng), side(rng)};
  } while (in.size.area() < 2);
  std::uniform_int_distribution<std::size_t> nfix(1, std::min(max_fix, in.size.area() - 1));
  const bool ties = rng() % 2 == 0;
  in.values = oracle::random_values(rng, in.size.area());
  if (ties) {
    for (double& v : in.values) v = std::round(v * 4.0) / 4.0;
  }
  in.points = oracle::random_points(rng, in.size, nfix(rng));
  return in;
}

bool non_constant(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(), [&](double x) { return x != v[0]; });
}

TEST(MetricParity, SmallMapsMatchBruteForceOracles) {
  std::mt19937_64 rng(101);
  int checked = 0;
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 8, 6);
    if (!non_constant(in.values)) continue;
    const SaliencyMap s(in.size.width, in.size.height, in.values);
    const FixationSet f(in.size, in.points);
    const auto fixated = oracle::linear(in.points, in.size.width);
    const auto gt_values = oracle::random_values(rng, in.size.area(), 0.01, 1.0);
    const FixationDensity gt = FixationDensity::from_mass(Grid(in.size.width, in.size.height, gt_values));
    const std::vector<double> gt_norm(gt.values().begin(), gt.values().end());

    EXPECT_NEAR(cc(s, gt), oracle::cc(in.values, gt_norm), 1e-12);
    EXPECT_NEAR(sim(s, gt), oracle::sim(in.values, gt_norm), 1e-12);
    EXPECT_NEAR(nss(s, f), oracle::nss(in.values, fixated), 1e-12);
    EXPECT_NEAR(auc_judd(s, f), oracle::auc_judd(in.values, fixated), 1e-12);
    ++checked;
  }
  EXPECT_GE(checked, 900);
}

TEST(MetricParity, JuddOnTinyMapsIsExact) {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 5, 4);
    const SaliencyMap s(in.size.width, in.size.height, in.values);
    EXPECT_NEAR(auc_judd(s, FixationSet(in.size, in.points)),
                oracle::auc_judd(in.values, oracle::linear(in.points, in.size.width)), 1e-12);
  }
}

TEST(MetricAxioms, CorrelationBoundsSymmetryAndAffineInvariance) {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_real_distribution<double> shift(-10.0, 10.0);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 8, 6);
    if (!non_constant(in.values)) continue;
    const auto other = oracle::random_values(rng, in.values.size(), 0.0, 1.0);
    const SaliencyMap s(in.size.width, in.size.height, in.values);
    const SaliencyMap t(in.size.width, in.size.height, other);
    const double c = cc(s, normalize_density(t));
    EXPECT_GE(c, -1.0 - 1e-12);
    EXPECT_LE(c, 1.0 + 1e-12);
    EXPECT_NEAR(c, cc(t, normalize_density(s)), 1e-12);
    EXPECT_NEAR(cc(s, normalize_density(s)), 1.0, 1e-12);

    const double a = scale(rng);
    const double b = shift(rng) + 10.0;  // keep values positive
    std::vector<double> moved;
    for (double v : in.values) moved.push_back(a * v + b);
    EXPECT_NEAR(cc(SaliencyMap(in.size.width, in.size.height, moved), normalize_density(t)), c, 1e-9);
  }
}

TEST(MetricAxioms, SimilarityBoundsAndIdentity) {
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 8, 6);
    const auto other = oracle::random_values(rng, in.values.size(), 0.0, 1.0);
    const SaliencyMap s(in.size.width, in.size.height, in.values);
    if (s.grid().sum() <= 0.0) continue;
    const double v = sim(s, normalize_density(SaliencyMap(in.size.width, in.size.height, other)));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0 + 1e-12);
    EXPECT_NEAR(sim(s, normalize_density(s)), 1.0, 1e-12);
  }
}

TEST(MetricAxioms, NssPositiveAffineInvariance) {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 8, 6);
    if (!non_constant(in.values)) continue;
    const FixationSet f(in.size, in.points);
    const double base = nss(SaliencyMap(in.size.width, in.size.height, in.values), f);
    const double a = scale(rng);
    const double b = shift(rng);
    std::vector<double> moved;
    for (double v : in.values) moved.push_back(std::max(0.0, a * v + b + 50.0));
    EXPECT_NEAR(nss(SaliencyMap(in.size.width, in.size.height, moved), f), base, 1e-9);
  }
}

TEST(MetricAxioms, JuddDependsOnlyOnRanking) {
  std::mt19937_64 rng(106);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 8, 6);
    const FixationSet f(in.size, in.points);
    const double base = auc_judd(SaliencyMap(in.size.width, in.size.height, in.values), f);
    std::vector<double> warped;
    const int kind = trial % 3;
    for (double v : in.values) {
      warped.push_back(kind == 0 ? std::exp(3.0 * v) : kind == 1 ? v * v * v + 2.0 : std::sqrt(v) * 7.0);
    }
    EXPECT_EQ(auc_judd(SaliencyMap(in.size.width, in.size.height, warped), f), base);
  }
}

TEST(MetricAxioms, ConstantMapsScoreChance) {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> level(0.0, 5.0);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 8, 6);
    const SaliencyMap s(in.size.width, in.size.height,
                        std::vector<double>(in.size.area(), level(rng)));
    EXPECT_EQ(auc_judd(s, FixationSet(in.size, in.points)), 0.5);
  }
}

TEST(MetricAxioms, MetricsArePureAndShuffledAucIsSeeded) {
  std::mt19937_64 rng(108);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 6, 3);
    if (!non_constant(in.values)) continue;
    const SaliencyMap s(in.size.width, in.size.height, in.values);
    const FixationSet f(in.size, in.points);
    const std::vector<FixationSet> others{
        FixationSet(in.size, oracle::random_points(rng, in.size, std::min<std::size_t>(4, in.size.area())))};
    const FixationDensity gt = normalize_density(s);
    EXPECT_EQ(cc(s, gt), cc(s, gt));
    EXPECT_EQ(sim(s, gt), sim(s, gt));
    EXPECT_EQ(nss(s, f), nss(s, f));
    EXPECT_EQ(auc_judd(s, f), auc_judd(s, f));
    const auto seed = static_cast<std::uint64_t>(trial);
    double first = 0.0;
    try {
      first = s_auc(s, f, others, 10, seed);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kNoNegativePool);
      continue;
    }
    EXPECT_EQ(s_auc(s, f, others, 10, seed), first);
    EXPECT_GE(first, 0.0);
    EXPECT_LE(first, 1.0);
  }
}

TEST(GateProperties, OutputIsExactlyOneInputAndIdempotent) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 6, 1);
    const SaliencyMap fused(in.size.width, in.size.height, in.values);
    const SaliencyMap visual(in.size.width, in.size.height,
                             oracle::random_values(rng, in.size.area()));
    const GateDecision d(static_cast<int>(rng() % 2), GateSource::kPredicted);
    const SaliencyMap out = gate_output(d, fused, visual);
    EXPECT_TRUE((out == fused) != (out == visual) || fused == visual);
    EXPECT_EQ(out, d.fuse() ? fused : visual);
    EXPECT_EQ(gate_output(d, d.fuse() ? out : fused, d.fuse() ? visual : out), out);
  }
}

TEST(FusionProperties, ResidualAlignNeverFlipsSigns) {
  std::mt19937_64 rng(110);
  for (int trial = 0; trial < 200; ++trial) {
    const FeatureTensor v(3, 2, 2, oracle::random_values(rng, 12, -1.0, 1.0));
    const FeatureVector a(oracle::random_values(rng, 3, 0.0, 2.0));
    const FeatureTensor out = fuse_spatial_align(v, a, true);
    for (std::size_t i = 0; i < 12; ++i) EXPECT_GE(out.values()[i] * v.values()[i], 0.0);
  }
}

TEST(FusionProperties, BilinearSuperpositionInBothArguments) {
  std::mt19937_64 rng(111);
  for (int trial = 0; trial < 200; ++trial) {
    const BilinearTransform m(3, 4, oracle::random_values(rng, 12, -1.0, 1.0));
    const FeatureVector a(oracle::random_values(rng, 3, -1.0, 1.0));
    const FeatureVector b(oracle::random_values(rng, 3, -1.0, 1.0));
    const FeatureVector v(oracle::random_values(rng, 4, -1.0, 1.0));
    const FeatureVector w(oracle::random_values(rng, 4, -1.0, 1.0));
    std::vector<double> ab;
    for (std::size_t i = 0; i < 3; ++i) ab.push_back(2.0 * a[i] - 0.5 * b[i]);
    std::vector<double> vw;
    for (std::size_t j = 0; j < 4; ++j) vw.push_back(v[j] + 3.0 * w[j]);
    const FeatureVector fa = fuse_bilinear(v, a, m);
    const FeatureVector fb = fuse_bilinear(v, b, m);
    const FeatureVector fab = fuse_bilinear(v, FeatureVector(ab), m);
    const FeatureVector fw = fuse_bilinear(w, a, m);
    const FeatureVector fvw = fuse_bilinear(FeatureVector(vw), a, m);
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(fab[j], 2.0 * fa[j] - 0.5 * fb[j], 1e-9);
      EXPECT_NEAR(fvw[j], fa[j] + 3.0 * fw[j], 1e-9);
    }
  }
}

TEST(LossProperties, KlIsZeroOnIdenticalAndNonNegative) {
  std::mt19937_64 rng(112);
  for (int trial = 0; trial < kInstances; ++trial) {
    const Instance in = random_instance(rng, 8, 1);
    const SaliencyMap p(in.size.width, in.size.height, in.values);
    const auto q = oracle::random_values(rng, in.values.size(), 0.0, 1.0);
    const SaliencyMap qs(in.size.width, in.size.height, q);
    if (p.grid().sum() <= 0.0 || qs.grid().sum() <= 0.0) continue;
    EXPECT_NEAR(kl_loss(p, normalize_density(p)), 0.0, 1e-9);
    EXPECT_GE(kl_loss(p, normalize_density(qs)), 0.0);
  }
}

TEST(LossProperties, CombinedLossIsLinear) {
  std::mt19937_64 rng(113);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_real_distribution<double> r(0.0, 1.0);
  for (int trial = 0; trial < kInstances; ++trial) {
    const double x1 = u(rng);
    const double x2 = u(rng);
    const double y = u(rng);
    const LossConfig cfg{r(rng)};
    EXPECT_NEAR(combined_loss(x1 + x2, y, cfg) - combined_loss(x2, y, cfg),
                combined_loss(x1, 0.0, cfg), 1e-9);
    EXPECT_NEAR(combined_loss(y, x1 + x2, cfg) - combined_loss(y, x2, cfg),
                combined_loss(0.0, x1, cfg), 1e-9);
    EXPECT_EQ(combined_loss(x1, y, {0.0}), x1);
    EXPECT_EQ(combined_loss(x1, y, {1.0}), y);
  }
}

TEST(LossProperties, GradientMatchesFiniteDifferencesAtRandomPoints) {
  std::mt19937_64 rng(114);
  const auto data = synthesize_separable_features(80, 0.2, 114);
  for (int point = 0; point < 10; ++point) {
    ClassifierParams p{};
    for (double& x : p) x = oracle::random_values(rng, 1, -2.0, 2.0)[0];
    const ClassifierParams g = classifier_gradient(p, data);
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double h = 1e-5;
      ClassifierParams up = p;
      ClassifierParams down = p;
      up[i] += h;
      down[i] -= h;
      const double numeric = (classifier_loss(up, data) - classifier_loss(down, data)) / (2 * h);
      EXPECT_LT(std::abs(g[i] - numeric), 1e-6 * std::max(1.0, std::abs(numeric)))
          << "point " << point << " param " << i;
    }
  }
}

TEST(ClassifierProperties, DecisionInvariantUnderJointRescaling) {
  std::mt19937_64 rng(115);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < kInstances; ++trial) {
    AvcClassifier clf;
    const auto w = oracle::random_values(rng, 4, -3.0, 3.0);
    std::copy(w.begin(), w.begin() + 3, clf.weights.begin());
    clf.bias = w[3];
    const auto x = oracle::random_values(rng, 3, -1.0, 1.0);
    const AvcFeature f{x[0], x[1], x[2]};
    const double c = scale(rng);
    AvcClassifier rescaled = clf;
    for (double& wi : rescaled.weights) wi /= c;
    const AvcFeature g{c * x[0], c * x[1], c * x[2]};
    if (std::abs(clf.logit(f)) < 1e-9) continue;
    EXPECT_EQ(predict_avc(clf, f).lc(), predict_avc(rescaled, g).lc());
  }
}

TEST(AudioProperties, FrameAlignGivesOneSlicePerFrame) {
  std::mt19937_64 rng(116);
  std::uniform_real_distribution<double> seconds(0.05, 3.0);
  std::uniform_real_distribution<double> fps(5.0, 60.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double dur = seconds(rng);
    const double rate = fps(rng);
    AudioClip clip{oracle::random_values(rng, static_cast<std::size_t>(dur * 16000.0), -0.5, 0.5),
                   16000.0};
    const MelSpectrogram mel = compute_mel(clip);
    const auto n = static_cast<std::size_t>(std::max(1.0, std::floor(dur * rate)));
    const auto slices = frame_align(mel, rate, 160, 16000.0, n);
    EXPECT_EQ(slices.size(), n);
  }
}

TEST(AudioProperties, LargerMagnitudesNeverLowerBands) {
  std::mt19937_64 rng(117);
  const MelFilterbank fb(24, 129, 16000.0, 0.0, 8000.0);
  for (int trial = 0; trial < 200; ++trial) {
    Spectrogram spec;
    spec.frames = 1;
    spec.bins = 129;
    spec.magnitudes = oracle::random_values(rng, 129, 0.0, 2.0);
    Spectrogram louder = spec;
    louder.magnitudes[rng() % 129] += 0.5;
    const MelSpectrogram a = mel_spectrogram(spec, fb);
    const MelSpectrogram b = mel_spectrogram(louder, fb);
    for (std::size_t m = 0; m < 24; ++m) EXPECT_GE(b.at(0, m), a.at(0, m));
  }
}

}  // namespace
}  // namespace avcgate
