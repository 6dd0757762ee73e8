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

#include "avcgate/fusion.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "avcgate/error.hpp"
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

FeatureTensor random_tensor(std::mt19937_64& rng, std::size_t c, std::size_t h, std::size_t w) {
  return FeatureTensor(c, h, w, oracle::random_values(rng, c * h * w, -1.0, 1.0));
}

FeatureVector random_vector(std::mt19937_64& rng, std::size_t n) {
  return FeatureVector(oracle::random_values(rng, n, -1.0, 1.0));
}

SaliencyMap random_map(std::mt19937_64& rng, std::size_t w = 4, std::size_t h = 3) {
  return SaliencyMap(w, h, oracle::random_values(rng, w * h));
}

TEST(GateOutput, SelectsFusedOrVisualBitExactly) {
  std::mt19937_64 rng(1);
  const SaliencyMap fused = random_map(rng);
  const SaliencyMap visual = random_map(rng);
  EXPECT_EQ(gate_output(GateDecision(1, GateSource::kLabel), fused, visual), fused);
  EXPECT_EQ(gate_output(GateDecision(0, GateSource::kPredicted), fused, visual), visual);
}

TEST(GateOutput, AlternatingTrackMatchesFrameLoop) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 10; ++i) {
    const SaliencyMap fused = random_map(rng);
    const SaliencyMap visual = random_map(rng);
    const int lc = i % 2;
    const SaliencyMap expected = lc == 1 ? fused : visual;
    EXPECT_EQ(gate_output(GateDecision(lc, GateSource::kLabel), fused, visual), expected);
  }
}

TEST(GateOutput, ShapeMismatchIsRejected) {
  const SaliencyMap a(2, 2, {1, 2, 3, 4});
  const SaliencyMap b(4, 1, {1, 2, 3, 4});
  EXPECT_EQ(code_of([&] { gate_output(GateDecision(1, GateSource::kLabel), a, b); }),
            ErrorCode::kShapeMismatch);
}

TEST(GateDecision, OnlyBinaryLabels) {
  EXPECT_EQ(code_of([] { GateDecision(2, GateSource::kLabel); }), ErrorCode::kInvalidLabel);
  EXPECT_EQ(code_of([] { GateDecision(-1, GateSource::kLabel); }), ErrorCode::kInvalidLabel);
}

TEST(BinarizeScore, ThresholdIsInclusive) {
  EXPECT_EQ(binarize_score(0.7).lc(), 1);
  EXPECT_EQ(binarize_score(0.5).lc(), 1);
  EXPECT_EQ(binarize_score(0.4999).lc(), 0);
  EXPECT_EQ(binarize_score(0.3, 0.2).source(), GateSource::kPredicted);
}

TEST(FuseConcat, ShapeLaw) {
  const FeatureTensor v(4, 2, 2, 1.0);
  const FeatureTensor out = fuse_concat(v, FeatureVector({1, 2, 3, 4}));
  EXPECT_EQ(out.channels(), 8u);
  EXPECT_EQ(out.height(), 2u);
  EXPECT_EQ(out.width(), 2u);
}

TEST(FuseConcat, AudioChannelsAreBroadcast) {
  std::mt19937_64 rng(3);
  const FeatureTensor v = random_tensor(rng, 3, 2, 5);
  const FeatureVector a = random_vector(rng, 3);
  const FeatureTensor out = fuse_concat(v, a);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t h = 0; h < 2; ++h) {
      for (std::size_t w = 0; w < 5; ++w) {
        EXPECT_EQ(out.at(c, h, w), v.at(c, h, w));
        EXPECT_EQ(out.at(3 + c, h, w), a[c]);
      }
    }
  }
}

TEST(FuseConcat, SplitRecoversInputsExactly) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const FeatureTensor v = random_tensor(rng, 5, 3, 4);
    const FeatureVector a = random_vector(rng, 5);
    const auto [v2, a2] = split_concat(fuse_concat(v, a));
    EXPECT_EQ(v2, v);
    EXPECT_EQ(a2, a);
  }
}

TEST(FuseConcat, ChannelMismatchIsRejected) {
  EXPECT_EQ(code_of([] { fuse_concat(FeatureTensor(3, 2, 2), FeatureVector({1, 2})); }),
            ErrorCode::kChannelMismatch);
  EXPECT_EQ(code_of([] { split_concat(FeatureTensor(3, 2, 2)); }), ErrorCode::kChannelMismatch);
}

TEST(FuseSpatialAlign, Identities) {
  std::mt19937_64 rng(5);
  const FeatureTensor v = random_tensor(rng, 4, 3, 3);
  EXPECT_EQ(fuse_spatial_align(v, FeatureVector(std::vector<double>(4, 1.0)), false), v);
  EXPECT_EQ(fuse_spatial_align(v, FeatureVector(std::vector<double>(4, 0.0)), true), v);
}

TEST(FuseSpatialAlign, MatchesTripleLoop) {
  std::mt19937_64 rng(6);
  const FeatureTensor v = random_tensor(rng, 3, 4, 5);
  const FeatureVector a = random_vector(rng, 3);
  for (bool residual : {false, true}) {
    const FeatureTensor out = fuse_spatial_align(v, a, residual);
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t h = 0; h < 4; ++h) {
        for (std::size_t w = 0; w < 5; ++w) {
          const double expected = v.at(c, h, w) * a[c] + (residual ? v.at(c, h, w) : 0.0);
          EXPECT_NEAR(out.at(c, h, w), expected, 1e-12);
        }
      }
    }
  }
}

TEST(FuseBilinear, OneHotAudioSelectsRow) {
  std::mt19937_64 rng(7);
  const FeatureVector v = random_vector(rng, 5);
  const BilinearTransform m(3, 5, std::vector<double>(15, 1.0));
  const FeatureVector out = fuse_bilinear(v, FeatureVector({0, 1, 0}), m);
  EXPECT_EQ(out, v);
}

TEST(FuseBilinear, ZeroAudioGivesZero) {
  std::mt19937_64 rng(8);
  const FeatureVector v = random_vector(rng, 5);
  const BilinearTransform m(3, 5, oracle::random_values(rng, 15));
  const FeatureVector out = fuse_bilinear(v, FeatureVector({0, 0, 0}), m);
  for (double x : out.values()) EXPECT_EQ(x, 0.0);
}

TEST(FuseBilinear, RandomThreeByFiveMatchesDoubleLoop) {
  std::mt19937_64 rng(9);
  const FeatureVector v = random_vector(rng, 5);
  const FeatureVector a = random_vector(rng, 3);
  const auto mv = oracle::random_values(rng, 15, -1.0, 1.0);
  const FeatureVector out = fuse_bilinear(v, a, BilinearTransform(3, 5, mv));
  ASSERT_EQ(out.size(), 5u);
  for (std::size_t j = 0; j < 5; ++j) {
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) expected += a[i] * mv[i * 5 + j] * v[j];
    EXPECT_NEAR(out[j], expected, 1e-12);
  }
}

TEST(FuseBilinear, LinearInAudio) {
  std::mt19937_64 rng(10);
  const FeatureVector v = random_vector(rng, 4);
  const FeatureVector a = random_vector(rng, 2);
  const FeatureVector b = random_vector(rng, 2);
  const BilinearTransform m(2, 4, oracle::random_values(rng, 8, -1.0, 1.0));
  const FeatureVector sum({a[0] + b[0], a[1] + b[1]});
  const FeatureVector fa = fuse_bilinear(v, a, m);
  const FeatureVector fb = fuse_bilinear(v, b, m);
  const FeatureVector fs = fuse_bilinear(v, sum, m);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(fs[j], fa[j] + fb[j], 1e-12);
}

TEST(FuseBilinear, ShapeMismatchIsRejected) {
  EXPECT_EQ(code_of([] {
              fuse_bilinear(FeatureVector({1, 2}), FeatureVector({1}),
                            BilinearTransform::identity(2));
            }),
            ErrorCode::kShapeMismatch);
}

std::vector<GatedFrame> frames_with(const std::vector<int>& labels) {
  std::mt19937_64 rng(11);
  std::vector<GatedFrame> frames;
  for (int lc : labels) {
    frames.push_back({random_tensor(rng, 2, 3, 3), random_vector(rng, 2),
                      GateDecision(lc, GateSource::kLabel)});
  }
  return frames;
}

// Visual-only output is the channel sum of magnitudes; fused output adds the audio.
SaliencyMap toy_decoder(std::size_t, const FeatureTensor& v, const FeatureVector* a) {
  std::vector<double> out(v.plane_size(), 0.0);
  for (std::size_t c = 0; c < v.channels(); ++c) {
    const auto p = v.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) out[i] += std::abs(p[i]) + (a ? std::abs((*a)[c]) : 0.0);
  }
  return SaliencyMap(v.width(), v.height(), std::move(out));
}

TEST(RunGatedPipeline, AllZeroFollowsVisualStream) {
  const auto frames = frames_with({0, 0, 0, 0});
  const GatedStreams s = run_gated_pipeline(frames, toy_decoder);
  EXPECT_EQ(s.gated, s.v_only);
  EXPECT_NE(s.gated, s.always_fuse);
}

TEST(RunGatedPipeline, AllOneFollowsFusedStream) {
  const auto frames = frames_with({1, 1, 1});
  const GatedStreams s = run_gated_pipeline(frames, toy_decoder);
  EXPECT_EQ(s.gated, s.always_fuse);
}

TEST(RunGatedPipeline, MixedDecisionsReplayPerFrame) {
  const auto frames = frames_with({0, 1, 1, 0, 1, 0, 0});
  const GatedStreams s = run_gated_pipeline(frames, toy_decoder);
  ASSERT_EQ(s.gated.size(), frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const SaliencyMap v = toy_decoder(i, frames[i].visual, nullptr);
    const SaliencyMap f = toy_decoder(i, frames[i].visual, &frames[i].audio);
    EXPECT_EQ(s.v_only[i], v);
    EXPECT_EQ(s.always_fuse[i], f);
    EXPECT_EQ(s.gated[i], gate_output(frames[i].decision, f, v));
  }
}

TEST(RunGatedPipeline, RunningTwiceIsIdempotent) {
  const auto frames = frames_with({1, 0, 1});
  const GatedStreams a = run_gated_pipeline(frames, toy_decoder);
  const GatedStreams b = run_gated_pipeline(frames, toy_decoder);
  EXPECT_EQ(a.gated, b.gated);
  EXPECT_EQ(a.v_only, b.v_only);
}

TEST(RunGatedPipeline, DecoderFailuresNameTheFrame) {
  const auto frames = frames_with({1, 0, 1});
  const SaliencyDecoder failing = [](std::size_t i, const FeatureTensor& v,
                                     const FeatureVector* a) {
    if (i == 2) throw std::runtime_error("boom");
    return toy_decoder(i, v, a);
  };
  try {
    run_gated_pipeline(frames, failing);
    FAIL() << "expected DecoderError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDecoderError);
    EXPECT_NE(std::string(e.what()).find("frame 2"), std::string::npos);
  }
}

TEST(RunGatedPipeline, MixedShapesAreRejected) {
  auto frames = frames_with({1, 0});
  frames[1].visual = FeatureTensor(2, 4, 4);
  EXPECT_EQ(code_of([&] { run_gated_pipeline(frames, toy_decoder); }), ErrorCode::kShapeMismatch);
}

TEST(GateTrack, RoundTripsThroughCsv) {
  const auto dir = oracle::scratch_dir("gate");
  const std::vector<GateDecision> track{GateDecision(0, GateSource::kLabel),
                                        GateDecision(1, GateSource::kPredicted),
                                        GateDecision(1, GateSource::kLabel)};
  write_gate_track(dir / "g.csv", track);
  EXPECT_EQ(read_gate_track(dir / "g.csv"), track);
  std::filesystem::remove_all(dir);
}

TEST(GateTrack, ReportsGapsAndBadValues) {
  const auto dir = oracle::scratch_dir("gate_bad");
  const auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return dir / name;
  };
  EXPECT_EQ(code_of([&] { read_gate_track(write("gap.csv", "0,1,label\n2,0,label\n")); }),
            ErrorCode::kGapInTrack);
  EXPECT_EQ(code_of([&] { read_gate_track(write("dup.csv", "0,1,label\n0,0,label\n")); }),
            ErrorCode::kDuplicateFrame);
  EXPECT_EQ(code_of([&] { read_gate_track(write("val.csv", "0,3,label\n")); }),
            ErrorCode::kInvalidLabel);
  EXPECT_EQ(code_of([&] { read_gate_track(dir / "missing.csv"); }), ErrorCode::kIoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace avcgate
