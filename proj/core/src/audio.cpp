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
#include <string>

#include "avcgate/error.hpp"
#include "avcgate/fft.hpp"

namespace avcgate {

std::vector<double> make_window(WindowKind kind, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (kind == WindowKind::kHann) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                  static_cast<double>(n));
    }
  }
  return w;
}

Spectrogram stft_magnitude(const AudioClip& clip, std::size_t window, std::size_t hop,
                           WindowKind kind) {
  if (!is_power_of_two(window)) {
    throw Error(ErrorCode::kBadWindow, "window " + std::to_string(window) + " is not a power of two");
  }
  if (hop == 0 || hop > window) {
    throw Error(ErrorCode::kBadWindow, "hop must be in (0, window]");
  }
  if (clip.samples.size() < window) {
    throw Error(ErrorCode::kTooShort, std::to_string(clip.samples.size()) +
                                          " samples is shorter than one window");
  }

  Spectrogram spec;
  spec.window = window;
  spec.hop = hop;
  spec.bins = window / 2 + 1;
  spec.frames = 1 + (clip.samples.size() - window) / hop;
  spec.magnitudes.resize(spec.frames * spec.bins);

  const std::vector<double> taper = make_window(kind, window);
  std::vector<double> frame(window);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    const double* src = clip.samples.data() + f * hop;
    for (std::size_t i = 0; i < window; ++i) frame[i] = src[i] * taper[i];
    const std::vector<double> mags = real_fft_magnitude(frame);
    std::copy(mags.begin(), mags.end(), spec.magnitudes.begin() + static_cast<std::ptrdiff_t>(f * spec.bins));
  }
  return spec;
}

double hz_to_mel(double hz) noexcept { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) noexcept { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank::MelFilterbank(std::size_t n_mels, std::size_t bins, double sample_rate,
                             double f_min, double f_max)
    : n_mels_(n_mels), bins_(bins), sample_rate_(sample_rate), f_min_(f_min), f_max_(f_max) {
  if (n_mels == 0) throw Error(ErrorCode::kBadRange, "n_mels must be >= 1");
  if (bins < 2) throw Error(ErrorCode::kBadRange, "need at least 2 frequency bins");
  if (!(sample_rate > 0.0) || !(f_min >= 0.0) || !(f_min < f_max) ||
      !(f_max <= sample_rate / 2.0)) {
    throw Error(ErrorCode::kBadRange, "require 0 <= f_min < f_max <= sample_rate / 2");
  }

  const double mel_lo = hz_to_mel(f_min);
  const double mel_hi = hz_to_mel(f_max);
  edges_.resize(n_mels + 2);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                    static_cast<double>(n_mels + 1);
    edges_[i] = mel_to_hz(mel);
  }
  edges_.front() = f_min;
  edges_.back() = f_max;
  centers_.assign(edges_.begin() + 1, edges_.end() - 1);

  weights_.assign(n_mels * bins, 0.0);
  for (std::size_t m = 0; m < n_mels; ++m) {
    const double left = edges_[m];
    const double center = edges_[m + 1];
    const double right = edges_[m + 2];
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = bin_frequency(k);
      if (f <= left || f >= right) continue;
      weights_[m * bins + k] = f <= center ? (f - left) / (center - left)
                                           : (right - f) / (right - center);
    }
  }
}

double MelFilterbank::bin_frequency(std::size_t bin) const noexcept {
  return static_cast<double>(bin) * sample_rate_ / (2.0 * static_cast<double>(bins_ - 1));
}

MelFilterbank build_mel_filterbank(std::size_t n_mels, std::size_t bins, double sample_rate,
                                   double f_min, double f_max) {
  return MelFilterbank(n_mels, bins, sample_rate, f_min, f_max);
}

double MelSpectrogram::energy(std::size_t frame, std::size_t band) const {
  const double v = at(frame, band);
  if (!log_compressed) return v;
  return v <= silence_value ? 0.0 : std::exp(v);
}

Grid MelSpectrogram::to_grid() const { return Grid(n_mels, frames, values); }

MelSpectrogram mel_spectrogram(const Spectrogram& spec, const MelFilterbank& fb,
                               double log_floor, bool log_compress) {
  if (fb.bins() != spec.bins) {
    throw Error(ErrorCode::kShapeMismatch, "filterbank has " + std::to_string(fb.bins()) +
                                               " bins, spectrogram has " +
                                               std::to_string(spec.bins));
  }
  if (!(log_floor > 0.0)) throw Error(ErrorCode::kInvalidArgument, "log_floor must be > 0");

  MelSpectrogram mel;
  mel.frames = spec.frames;
  mel.n_mels = fb.n_mels();
  mel.log_compressed = log_compress;
  mel.silence_value = log_compress ? std::log(log_floor) : 0.0;
  mel.values.resize(mel.frames * mel.n_mels);

  std::vector<double> power(spec.bins);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    for (std::size_t k = 0; k < spec.bins; ++k) {
      const double m = spec.at(f, k);
      power[k] = m * m;
    }
    for (std::size_t band = 0; band < fb.n_mels(); ++band) {
      const auto row = fb.row(band);
      double e = 0.0;
      for (std::size_t k = 0; k < spec.bins; ++k) e += row[k] * power[k];
      mel.at(f, band) = log_compress ? std::log(std::max(e, log_floor)) : e;
    }
  }
  return mel;
}

AudioClip resample_linear(const AudioClip& clip, double target_rate) {
  if (!(clip.sample_rate > 0.0) || !(target_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sample rates must be positive");
  }
  if (clip.sample_rate == target_rate || clip.samples.empty()) {
    return AudioClip{clip.samples, target_rate};
  }
  const double ratio = clip.sample_rate / target_rate;
  const auto out_len = static_cast<std::size_t>(
      std::floor(static_cast<double>(clip.samples.size() - 1) / ratio)) + 1;
  AudioClip out{std::vector<double>(out_len), target_rate};
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * ratio;
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, clip.samples.size() - 1);
    const double t = pos - static_cast<double>(lo);
    out.samples[i] = (1.0 - t) * clip.samples[lo] + t * clip.samples[hi];
  }
  return out;
}

MelSpectrogram compute_mel(const AudioClip& clip, const MelOptions& options) {
  const AudioClip& source =
      clip.sample_rate == options.sample_rate ? clip : resample_linear(clip, options.sample_rate);
  const Spectrogram spec =
      stft_magnitude(source, options.window, options.hop, options.window_kind);
  const MelFilterbank fb = build_mel_filterbank(options.n_mels, spec.bins, options.sample_rate,
                                                options.f_min, options.f_max);
  return mel_spectrogram(spec, fb, options.log_floor, options.log_compress);
}

std::size_t slice_width_frames(double sample_rate, std::size_t hop,
                               const FrameAlignOptions& options) {
  const double width = std::round(options.slice_seconds * sample_rate / static_cast<double>(hop));
  return width < 1.0 ? 1 : static_cast<std::size_t>(width);
}

std::vector<MelSlice> frame_align(const MelSpectrogram& mel, double video_fps, std::size_t hop,
                                  double sample_rate, std::size_t n_video_frames,
                                  const FrameAlignOptions& options) {
  if (mel.frames == 0 || mel.n_mels == 0) {
    throw Error(ErrorCode::kEmptyAudio, "mel spectrogram has no frames");
  }
  if (n_video_frames == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one video frame");
  if (!(video_fps > 0.0) || !(sample_rate > 0.0) || hop == 0) {
    throw Error(ErrorCode::kInvalidArgument, "fps, sample rate and hop must be positive");
  }

  const std::size_t width = slice_width_frames(sample_rate, hop, options);
  const auto half = static_cast<std::ptrdiff_t>(width / 2);
  const double half_window = static_cast<double>(options.window) / 2.0;

  std::vector<MelSlice> slices;
  slices.reserve(n_video_frames);
  for (std::size_t i = 0; i < n_video_frames; ++i) {
    MelSlice slice;
    slice.center_sample = static_cast<double>(i) * sample_rate / video_fps;
    const auto center_frame = static_cast<std::ptrdiff_t>(
        std::llround((slice.center_sample - half_window) / static_cast<double>(hop)));
    slice.first_frame = center_frame - half;
    slice.mel.frames = width;
    slice.mel.n_mels = mel.n_mels;
    slice.mel.log_compressed = mel.log_compressed;
    slice.mel.silence_value = mel.silence_value;
    slice.mel.values.assign(width * mel.n_mels, mel.silence_value);
    for (std::size_t r = 0; r < width; ++r) {
      const std::ptrdiff_t src = slice.first_frame + static_cast<std::ptrdiff_t>(r);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(mel.frames)) continue;
      std::copy_n(mel.values.begin() + src * static_cast<std::ptrdiff_t>(mel.n_mels),
                  mel.n_mels,
                  slice.mel.values.begin() + static_cast<std::ptrdiff_t>(r * mel.n_mels));
    }
    slices.push_back(std::move(slice));
  }
  return slices;
}

}  // namespace avcgate
