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

// Audio frontend: raw PCM -> STFT magnitudes -> mel filterbank -> log-mel,
// plus per-video-frame slicing of the resulting mel spectrogram.
//
// Defaults: 16 kHz, 512-sample Hann window, hop 160, 64 mel bands over
// 0-8 kHz, log floor 1e-10. Mel scale is 2595 * log10(1 + f / 700).

#ifndef AVCGATE_AUDIO_HPP_
#define AVCGATE_AUDIO_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "avcgate/grid.hpp"

namespace avcgate {

struct AudioClip {
  std::vector<double> samples;  // nominally in [-1, 1]
  double sample_rate = 16000.0;

  double duration_seconds() const noexcept {
    return static_cast<double>(samples.size()) / sample_rate;
  }

  bool operator==(const AudioClip&) const = default;
};

enum class WindowKind { kHann, kRectangular };

struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;  // window / 2 + 1
  std::size_t hop = 0;
  std::size_t window = 0;
  std::vector<double> magnitudes;  // frames x bins, row-major

  double at(std::size_t frame, std::size_t bin) const { return magnitudes[frame * bins + bin]; }
  double& at(std::size_t frame, std::size_t bin) { return magnitudes[frame * bins + bin]; }
};

// Periodic window of length n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

// Frame count is 1 + (len - window) / hop. Throws BadWindow (window not a
// power of two, hop outside (0, window]) or TooShort (fewer samples than one
// window).
Spectrogram stft_magnitude(const AudioClip& clip, std::size_t window, std::size_t hop,
                           WindowKind kind = WindowKind::kHann);

double hz_to_mel(double hz) noexcept;
double mel_to_hz(double mel) noexcept;

class MelFilterbank {
 public:
  MelFilterbank(std::size_t n_mels, std::size_t bins, double sample_rate, double f_min,
                double f_max);

  std::size_t n_mels() const noexcept { return n_mels_; }
  std::size_t bins() const noexcept { return bins_; }
  double sample_rate() const noexcept { return sample_rate_; }
  double f_min() const noexcept { return f_min_; }
  double f_max() const noexcept { return f_max_; }

  double weight(std::size_t band, std::size_t bin) const { return weights_[band * bins_ + bin]; }
  std::span<const double> row(std::size_t band) const {
    return std::span<const double>(weights_).subspan(band * bins_, bins_);
  }
  // Peak frequency of each triangle, Hz.
  std::span<const double> center_frequencies() const noexcept { return centers_; }
  // n_mels + 2 band edges, Hz; triangle m spans edges[m] .. edges[m + 2].
  std::span<const double> edge_frequencies() const noexcept { return edges_; }

  double bin_frequency(std::size_t bin) const noexcept;

 private:
  std::size_t n_mels_;
  std::size_t bins_;
  double sample_rate_;
  double f_min_;
  double f_max_;
  std::vector<double> edges_;
  std::vector<double> centers_;
  std::vector<double> weights_;
};

// Throws BadRange unless 0 <= f_min < f_max <= sample_rate / 2, n_mels >= 1
// and bins >= 2.
MelFilterbank build_mel_filterbank(std::size_t n_mels, std::size_t bins, double sample_rate,
                                   double f_min, double f_max);

struct MelSpectrogram {
  std::size_t frames = 0;
  std::size_t n_mels = 0;
  std::vector<double> values;  // frames x n_mels, row-major
  bool log_compressed = true;
  // Value representing zero energy: ln(log_floor) when log-compressed.
  double silence_value = 0.0;

  double at(std::size_t frame, std::size_t band) const { return values[frame * n_mels + band]; }
  double& at(std::size_t frame, std::size_t band) { return values[frame * n_mels + band]; }

  // Linear band energy regardless of compression.
  double energy(std::size_t frame, std::size_t band) const;

  // frames rows x n_mels columns.
  Grid to_grid() const;
};

inline constexpr double kDefaultLogFloor = 1e-10;

// Power spectrum projected through the filterbank, then ln(max(e, floor))
// when `log_compress` is set. Throws ShapeMismatch when bins disagree and
// InvalidArgument when log_floor <= 0.
MelSpectrogram mel_spectrogram(const Spectrogram& spec, const MelFilterbank& fb,
                               double log_floor = kDefaultLogFloor, bool log_compress = true);

struct MelOptions {
  double sample_rate = 16000.0;
  std::size_t window = 512;
  std::size_t hop = 160;
  std::size_t n_mels = 64;
  double f_min = 0.0;
  double f_max = 8000.0;
  double log_floor = kDefaultLogFloor;
  bool log_compress = true;
  WindowKind window_kind = WindowKind::kHann;
};

// Resamples to options.sample_rate when needed, then runs the full chain.
MelSpectrogram compute_mel(const AudioClip& clip, const MelOptions& options = {});

// Linear-interpolation resampling.
AudioClip resample_linear(const AudioClip& clip, double target_rate);

struct FrameAlignOptions {
  double slice_seconds = 1.0;
  // Analysis window used to produce the mel frames; mel frame m is centered
  // on sample m * hop + window / 2.
  std::size_t window = 512;
};

struct MelSlice {
  MelSpectrogram mel;           // slice_frames x n_mels
  double center_sample = 0.0;   // video frame timestamp in samples
  std::ptrdiff_t first_frame = 0;  // source mel frame of row 0 (may be < 0)
};

std::size_t slice_width_frames(double sample_rate, std::size_t hop,
                               const FrameAlignOptions& options = {});

// One slice per video frame i, centered on timestamp i / video_fps. Rows
// that fall outside the source are filled with the silence value. Throws
// EmptyAudio for an empty spectrogram and InvalidArgument when
// n_video_frames is 0 or rates are not positive.
std::vector<MelSlice> frame_align(const MelSpectrogram& mel, double video_fps, std::size_t hop,
                                  double sample_rate, std::size_t n_video_frames,
                                  const FrameAlignOptions& options = {});

// PCM 16-bit WAV. Multi-channel input is averaged to mono.
AudioClip read_wav(const std::filesystem::path& path);
AudioClip parse_wav(std::string_view bytes);
// 16-bit mono; samples clamped to [-1, 1].
void write_wav(const std::filesystem::path& path, const AudioClip& clip);
std::string encode_wav(const AudioClip& clip);

}  // namespace avcgate

#endif  // AVCGATE_AUDIO_HPP_
