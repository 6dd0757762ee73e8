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

// Seeded synthetic audio-visual clips with known consistency labels.
//
// Every clip shows a dark frame with one large bright target blob (the
// salient object that ground-truth fixations land on) and smaller, dimmer
// distractor blobs. All blobs move in independent start/stop bursts. Only
// the audio differs between scenarios:
//
//   on_screen_sounding  440 Hz tone whose amplitude follows the target's
//                       motion energy                     -> label 1
//   off_screen_audio    440 Hz tone driven by a hidden, unrelated motion
//                       process                           -> label 0
//   background_music    three-note chord with a periodic beat envelope
//                                                         -> label 0
//   silent              all-zero audio                    -> label 0

#ifndef AVCGATE_SYNTH_HPP_
#define AVCGATE_SYNTH_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "avcgate/audio.hpp"
#include "avcgate/dataset.hpp"
#include "avcgate/grid.hpp"

namespace avcgate {

enum class Scenario : std::size_t {
  kOnScreenSounding = 0,
  kOffScreenAudio,
  kBackgroundMusic,
  kSilent,
};

inline constexpr std::size_t kScenarioCount = 4;

std::string_view scenario_name(Scenario s) noexcept;
// Throws BadScenario for unknown names.
Scenario parse_scenario(std::string_view name);
// The scenario's consistency label.
int scenario_label(Scenario s) noexcept;

struct SynthOptions {
  std::size_t width = 32;
  std::size_t height = 32;
  double fps = 25.0;
  double sample_rate = 16000.0;
  double tone_hz = 440.0;
  double jitter_px = 1.0;
  std::size_t fixations_per_frame = 6;
  double background = 0.1;
  double target_sigma = 2.0;
  double target_amplitude = 0.85;
  std::size_t distractors = 2;
  double distractor_sigma = 1.5;
  double distractor_amplitude = 0.7;
  double speed_min = 1.0;  // px per frame while moving
  double speed_max = 2.0;
  double switch_probability = 0.2;  // per-frame chance to start/stop
  double audio_noise = 0.005;
  // Degrees of visual angle are mapped to this many pixels when the clip is
  // written as a dataset.
  double pixels_per_degree = 2.0;
};

struct SyntheticClip {
  Scenario scenario = Scenario::kSilent;
  double fps = 25.0;
  std::vector<Grid> frames;
  AudioClip audio;
  std::vector<FixationSet> gt_fixations;
  AvcLabelTrack gt_avc;
  // Motion energy of the target alone, per frame (frame 0 measured against
  // a pre-roll position).
  std::vector<double> source_motion;
  // Audio amplitude envelope per video frame.
  std::vector<double> audio_envelope;
  std::vector<std::array<double, 2>> target_centers;  // (x, y) per frame

  bool operator==(const SyntheticClip&) const = default;
};

// Deterministic in (scenario, n_frames, seed, options). Throws
// InvalidArgument when n_frames < 8 or the frame is smaller than 8x8.
SyntheticClip synthesize_clip(Scenario scenario, std::size_t n_frames, std::uint64_t seed,
                              const SynthOptions& options = {});

using ScenarioMix = std::array<double, kScenarioCount>;

// "on_screen_sounding=0.5,background_music=0.5"; unspecified scenarios get 0.
// Throws BadScenario for unknown names and ConfigError when the fractions
// are negative or do not sum to 1 (within 1e-9).
ScenarioMix parse_scenario_mix(std::string_view text);
// Consistent share p; the rest split evenly between off-screen audio and
// background music.
ScenarioMix consistency_mix(double consistent_fraction);

// Per-clip scenarios for n clips: largest-remainder counts, then a seeded
// shuffle.
std::vector<Scenario> allocate_scenarios(const ScenarioMix& mix, std::size_t n_clips,
                                         std::uint64_t seed);

struct SyntheticDatasetSpec {
  std::size_t n_clips = 40;
  std::size_t n_frames = 50;
  ScenarioMix mix = consistency_mix(0.5);
  std::uint64_t seed = 0;
  SynthOptions options;
  std::string name = "synthetic";
};

std::vector<SyntheticClip> synthesize_dataset(const SyntheticDatasetSpec& spec);

inline constexpr std::string_view kManifestFileName = "manifest.avsd";

// Writes clip_NNN/{frames/NNNNN.pgm, audio.wav, fixations.csv, avc.csv} and
// manifest.avsd under out_dir. Returns the manifest (base_dir = out_dir).
DatasetManifest write_synthetic_dataset(const std::filesystem::path& out_dir,
                                        const SyntheticDatasetSpec& spec);

}  // namespace avcgate

#endif  // AVCGATE_SYNTH_HPP_
