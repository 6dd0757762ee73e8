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

#include "avcgate/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "avcgate/error.hpp"
#include "avcgate/fft.hpp"
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

AudioClip sine(double hz, double seconds, double rate = 16000.0, double amplitude = 0.5) {
  AudioClip clip;
  clip.sample_rate = rate;
  clip.samples.resize(static_cast<std::size_t>(seconds * rate));
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    clip.samples[i] =
        amplitude * std::sin(2.0 * std::numbers::pi * hz * static_cast<double>(i) / rate);
  }
  return clip;
}

TEST(Fft, MatchesDirectDftOnNoise) {
  std::mt19937_64 rng(2);
  const auto x = oracle::random_values(rng, 64, -1.0, 1.0);
  const auto fast = real_fft_magnitude(x);
  const auto slow = oracle::dft_magnitude(x);
  ASSERT_EQ(fast.size(), 33u);
  for (std::size_t k = 0; k < fast.size(); ++k) EXPECT_NEAR(fast[k], slow[k], 1e-10) << k;
}

TEST(Stft, ZeroInputGivesZeroMagnitudes) {
  const AudioClip clip{std::vector<double>(2048, 0.0), 16000.0};
  const Spectrogram s = stft_magnitude(clip, 512, 256);
  EXPECT_TRUE(std::all_of(s.magnitudes.begin(), s.magnitudes.end(),
                          [](double m) { return m == 0.0; }));
}

TEST(Stft, FrameCountWithoutPadding) {
  const AudioClip clip{std::vector<double>(1024, 0.1), 16000.0};
  const Spectrogram s = stft_magnitude(clip, 512, 256);
  EXPECT_EQ(s.frames, 3u);
  EXPECT_EQ(s.bins, 257u);
}

TEST(Stft, BinCenteredSineWithRectangularWindow) {
  const std::size_t n = 256;
  const std::size_t bin = 8;
  const double rate = 16000.0;
  const AudioClip clip = sine(static_cast<double>(bin) * rate / static_cast<double>(n),
                              static_cast<double>(n) / rate, rate);
  const Spectrogram s = stft_magnitude(clip, n, n, WindowKind::kRectangular);
  ASSERT_EQ(s.frames, 1u);
  const auto expected = oracle::dft_magnitude(clip.samples);
  const double peak = s.at(0, bin);
  EXPECT_NEAR(peak, 0.5 * static_cast<double>(n) / 2.0, 1e-9);
  for (std::size_t k = 0; k < s.bins; ++k) {
    EXPECT_NEAR(s.at(0, k), expected[k], 1e-9);
    if (k != bin) {
      EXPECT_LT(s.at(0, k), 1e-6 * peak) << k;
    }
  }
}

TEST(Stft, HannFramesMatchWindowedDft) {
  std::mt19937_64 rng(4);
  AudioClip clip{oracle::random_values(rng, 300, -1.0, 1.0), 8000.0};
  const Spectrogram s = stft_magnitude(clip, 128, 64);
  ASSERT_EQ(s.frames, 3u);
  for (std::size_t f = 0; f < s.frames; ++f) {
    std::vector<double> frame(128);
    for (std::size_t i = 0; i < 128; ++i) {
      const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / 128.0);
      frame[i] = w * clip.samples[f * 64 + i];
    }
    const auto expected = oracle::dft_magnitude(frame);
    for (std::size_t k = 0; k < s.bins; ++k) EXPECT_NEAR(s.at(f, k), expected[k], 1e-9);
  }
}

TEST(Stft, ScalesLinearly) {
  std::mt19937_64 rng(5);
  AudioClip a{oracle::random_values(rng, 1024, -0.5, 0.5), 16000.0};
  AudioClip b = a;
  for (double& x : b.samples) x *= 3.0;
  const Spectrogram sa = stft_magnitude(a, 256, 128);
  const Spectrogram sb = stft_magnitude(b, 256, 128);
  for (std::size_t i = 0; i < sa.magnitudes.size(); ++i) {
    EXPECT_NEAR(sb.magnitudes[i], 3.0 * sa.magnitudes[i], 1e-9);
  }
}

TEST(Stft, RejectsBadArguments) {
  const AudioClip clip{std::vector<double>(1024, 0.0), 16000.0};
  EXPECT_EQ(code_of([&] { stft_magnitude(clip, 500, 100); }), ErrorCode::kBadWindow);
  EXPECT_EQ(code_of([&] { stft_magnitude(clip, 512, 0); }), ErrorCode::kBadWindow);
  EXPECT_EQ(code_of([&] { stft_magnitude(clip, 2048, 256); }), ErrorCode::kTooShort);
}

TEST(MelScale, AgreesWithNaturalLogForm) {
  for (double hz : {0.0, 100.0, 700.0, 1000.0, 4000.0, 8000.0}) {
    EXPECT_NEAR(hz_to_mel(hz), oracle::hz_to_mel(hz), 1e-4 * oracle::hz_to_mel(hz) + 1e-12);
    EXPECT_NEAR(mel_to_hz(hz_to_mel(hz)), hz, 1e-9 * (1.0 + hz));
  }
}

TEST(MelFilterbank, CentersMatchOracle) {
  const MelFilterbank fb(10, 257, 16000.0, 0.0, 8000.0);
  const auto expected = oracle::mel_centers(10, 0.0, 8000.0);
  ASSERT_EQ(fb.center_frequencies().size(), 10u);
  for (std::size_t m = 0; m < 10; ++m) {
    EXPECT_NEAR(fb.center_frequencies()[m], expected[m], 0.5) << m;
    if (m > 0) {
      EXPECT_GT(fb.center_frequencies()[m], fb.center_frequencies()[m - 1]);
    }
  }
}

TEST(MelFilterbank, TrianglesAreNonNegativeWithSinglePeak) {
  const MelFilterbank fb(40, 257, 16000.0, 0.0, 8000.0);
  std::size_t previous_peak = 0;
  for (std::size_t m = 0; m < fb.n_mels(); ++m) {
    const auto row = fb.row(m);
    double sum = 0.0;
    for (double w : row) {
      EXPECT_GE(w, 0.0);
      EXPECT_LE(w, 1.0);
      sum += w;
    }
    EXPECT_GT(sum, 0.0) << "band " << m;
    const auto peak = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
    // Rising then falling.
    for (std::size_t k = 1; k <= peak; ++k) EXPECT_LE(row[k - 1], row[k]);
    for (std::size_t k = peak + 1; k < row.size(); ++k) EXPECT_LE(row[k], row[k - 1]);
    EXPECT_GE(peak, previous_peak);
    previous_peak = peak;
  }
}

TEST(MelFilterbank, RejectsBadRanges) {
  EXPECT_EQ(code_of([] { MelFilterbank(0, 257, 16000.0, 0.0, 8000.0); }), ErrorCode::kBadRange);
  EXPECT_EQ(code_of([] { MelFilterbank(10, 257, 16000.0, 500.0, 400.0); }), ErrorCode::kBadRange);
  EXPECT_EQ(code_of([] { MelFilterbank(10, 257, 16000.0, 0.0, 9000.0); }), ErrorCode::kBadRange);
}

TEST(MelSpectrogram, SilenceMapsToLogFloor) {
  const AudioClip clip{std::vector<double>(4000, 0.0), 16000.0};
  const MelSpectrogram mel = compute_mel(clip);
  ASSERT_GT(mel.frames, 0u);
  for (double v : mel.values) EXPECT_DOUBLE_EQ(v, std::log(kDefaultLogFloor));
  EXPECT_DOUBLE_EQ(mel.silence_value, std::log(kDefaultLogFloor));
}

TEST(MelSpectrogram, SingleBinEnergyIsWeightTimesPower) {
  Spectrogram spec;
  spec.frames = 1;
  spec.bins = 257;
  spec.window = 512;
  spec.hop = 256;
  spec.magnitudes.assign(257, 0.0);
  spec.magnitudes[40] = 3.0;
  const MelFilterbank fb(20, 257, 16000.0, 0.0, 8000.0);
  const MelSpectrogram mel = mel_spectrogram(spec, fb, 1e-10, false);
  for (std::size_t m = 0; m < 20; ++m) EXPECT_DOUBLE_EQ(mel.at(0, m), fb.weight(m, 40) * 9.0);
}

TEST(MelSpectrogram, MatchesDotProductOracleOnNoise) {
  std::mt19937_64 rng(6);
  AudioClip clip{oracle::random_values(rng, 3000, -1.0, 1.0), 16000.0};
  const Spectrogram spec = stft_magnitude(clip, 512, 160);
  const MelFilterbank fb(32, spec.bins, 16000.0, 50.0, 7600.0);
  const MelSpectrogram mel = mel_spectrogram(spec, fb);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    for (std::size_t m = 0; m < 32; ++m) {
      long double e = 0.0L;
      for (std::size_t k = 0; k < spec.bins; ++k) {
        e += static_cast<long double>(fb.weight(m, k)) * spec.at(f, k) * spec.at(f, k);
      }
      const double expected = std::log(std::max(static_cast<double>(e), kDefaultLogFloor));
      EXPECT_NEAR(mel.at(f, m), expected, 1e-9);
      EXPECT_NEAR(mel.energy(f, m), static_cast<double>(e), 1e-9 * (1.0 + static_cast<double>(e)));
    }
  }
}

TEST(MelSpectrogram, LouderInputNeverLowersBands) {
  std::mt19937_64 rng(7);
  AudioClip quiet{oracle::random_values(rng, 4000, -0.2, 0.2), 16000.0};
  AudioClip loud = quiet;
  for (double& x : loud.samples) x *= 2.0;
  const MelSpectrogram a = compute_mel(quiet);
  const MelSpectrogram b = compute_mel(loud);
  for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_GE(b.values[i], a.values[i]);
}

TEST(MelSpectrogram, SineEnergyLandsInItsBand) {
  const AudioClip clip = sine(440.0, 1.0);
  const MelSpectrogram mel = compute_mel(clip);
  const MelFilterbank fb(64, 257, 16000.0, 0.0, 8000.0);
  const std::size_t f = mel.frames / 2;
  std::size_t best = 0;
  for (std::size_t m = 1; m < mel.n_mels; ++m) {
    if (mel.at(f, m) > mel.at(f, best)) best = m;
  }
  const auto edges = fb.edge_frequencies();
  EXPECT_LT(edges[best], 440.0);
  EXPECT_GT(edges[best + 2], 440.0);
}

TEST(MelSpectrogram, SineEnergyMatchesParseval) {
  // A Hann-windowed, bin-centered sine of amplitude A has peak magnitude A*N/4.
  const std::size_t n = 512;
  const double hz = 40.0 * 16000.0 / static_cast<double>(n);
  const AudioClip clip = sine(hz, 0.25);
  const Spectrogram spec = stft_magnitude(clip, n, 160);
  const double peak = spec.at(2, 40);
  const double expected = 0.5 * static_cast<double>(n) / 4.0;
  EXPECT_NEAR(20.0 * std::log10(peak / expected), 0.0, 3.0);
}

TEST(FrameAlign, ThreeSecondsAtTwentyFiveFps) {
  const double rate = 16000.0;
  const std::size_t hop = 160;
  const AudioClip clip = sine(300.0, 3.0, rate);
  const MelSpectrogram mel = compute_mel(clip);
  const auto slices = frame_align(mel, 25.0, hop, rate, 75);
  ASSERT_EQ(slices.size(), 75u);
  const std::size_t width = slice_width_frames(rate, hop);
  EXPECT_EQ(width, 100u);
  for (std::size_t i = 0; i < slices.size(); ++i) {
    EXPECT_DOUBLE_EQ(slices[i].center_sample, oracle::frame_timestamp_samples(i, 25.0, rate));
    EXPECT_EQ(slices[i].mel.frames, width);
    EXPECT_EQ(slices[i].mel.n_mels, 64u);
    // Mel frame m is centered on m*hop + window/2; the slice row at width/2
    // holds the frame nearest the timestamp.
    const std::ptrdiff_t center_row = slices[i].first_frame + static_cast<std::ptrdiff_t>(width / 2);
    const double center_of_row = static_cast<double>(center_row) * hop + 256.0;
    EXPECT_LE(std::abs(center_of_row - slices[i].center_sample), hop / 2.0 + 1e-9);
  }
}

TEST(FrameAlign, PadsBeforeTheStartWithSilence) {
  const double rate = 16000.0;
  const MelSpectrogram mel = compute_mel(sine(300.0, 2.0, rate));
  const auto slices = frame_align(mel, 25.0, 160, rate, 10);
  const MelSlice& first = slices[0];
  ASSERT_LT(first.first_frame, 0);
  const auto padded_rows = static_cast<std::size_t>(-first.first_frame);
  for (std::size_t r = 0; r < padded_rows; ++r) {
    for (std::size_t m = 0; m < mel.n_mels; ++m) EXPECT_EQ(first.mel.at(r, m), mel.silence_value);
  }
  for (std::size_t m = 0; m < mel.n_mels; ++m) EXPECT_EQ(first.mel.at(padded_rows, m), mel.at(0, m));
}

TEST(FrameAlign, OneSlicePerVideoFrame) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> len(1, 60);
  const MelSpectrogram mel = compute_mel(sine(200.0, 1.0));
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = len(rng);
    EXPECT_EQ(frame_align(mel, 30.0, 160, 16000.0, n).size(), n);
  }
}

TEST(FrameAlign, RejectsEmptyInputs) {
  MelSpectrogram empty;
  EXPECT_EQ(code_of([&] { frame_align(empty, 25.0, 160, 16000.0, 3); }), ErrorCode::kEmptyAudio);
}

TEST(Resample, KeepsEndpointsAndHalvesLength) {
  AudioClip clip{{0.0, 1.0, 2.0, 3.0, 4.0}, 16000.0};
  const AudioClip out = resample_linear(clip, 8000.0);
  EXPECT_EQ(out.samples, (std::vector<double>{0.0, 2.0, 4.0}));
  EXPECT_EQ(out.sample_rate, 8000.0);
}

TEST(Wav, RoundTripWithinQuantization) {
  std::mt19937_64 rng(9);
  AudioClip clip{oracle::random_values(rng, 500, -0.99, 0.99), 22050.0};
  const AudioClip back = parse_wav(encode_wav(clip));
  EXPECT_EQ(back.sample_rate, 22050.0);
  ASSERT_EQ(back.samples.size(), clip.samples.size());
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    EXPECT_NEAR(back.samples[i], clip.samples[i], 0.5 / 32768.0 + 1e-12);
  }
}

TEST(Wav, FileRoundTrip) {
  const auto dir = oracle::scratch_dir("wav");
  const AudioClip clip = sine(440.0, 0.1);
  write_wav(dir / "a.wav", clip);
  const AudioClip back = read_wav(dir / "a.wav");
  EXPECT_EQ(back.samples.size(), clip.samples.size());
  std::filesystem::remove_all(dir);
}

TEST(Wav, RejectsGarbage) {
  EXPECT_EQ(code_of([] { parse_wav("RIFF1234WAVEjunk"); }), ErrorCode::kDecodeError);
  EXPECT_EQ(code_of([] { read_wav("/nonexistent/x.wav"); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace avcgate
