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

#include "avcgate/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "avcgate/error.hpp"
#include "avcgate/map_io.hpp"
#include "avcgate/random.hpp"
#include "avcgate/text.hpp"
#include "avcgate/toy_models.hpp"

namespace avcgate {
namespace {

constexpr std::array<std::string_view, kScenarioCount> kScenarioNames = {
    "on_screen_sounding", "off_screen_audio", "background_music", "silent"};

// Start/stop mover with a wandering heading; bounces inside the margin.
class Mover {
 public:
  Mover(Rng rng, const SynthOptions& o, double margin)
      : rng_(std::move(rng)), o_(o), margin_(margin) {
    x_ = rng_.uniform(margin_, static_cast<double>(o_.width) - 1.0 - margin_);
    y_ = rng_.uniform(margin_, static_cast<double>(o_.height) - 1.0 - margin_);
    heading_ = rng_.uniform(0.0, 2.0 * std::numbers::pi);
    moving_ = rng_.bernoulli(0.5);
    speed_ = rng_.uniform(o_.speed_min, o_.speed_max);
  }

  void step() {
    if (rng_.bernoulli(o_.switch_probability)) {
      moving_ = !moving_;
      if (moving_) speed_ = rng_.uniform(o_.speed_min, o_.speed_max);
    }
    heading_ += rng_.normal(0.0, 0.4);
    if (!moving_) return;
    x_ += speed_ * std::cos(heading_);
    y_ += speed_ * std::sin(heading_);
    const double max_x = static_cast<double>(o_.width) - 1.0 - margin_;
    const double max_y = static_cast<double>(o_.height) - 1.0 - margin_;
    if (x_ < margin_ || x_ > max_x) {
      x_ = std::clamp(x_, margin_, max_x);
      heading_ = std::numbers::pi - heading_;
    }
    if (y_ < margin_ || y_ > max_y) {
      y_ = std::clamp(y_, margin_, max_y);
      heading_ = -heading_;
    }
  }

  double x() const { return x_; }
  double y() const { return y_; }

 private:
  Rng rng_;
  const SynthOptions& o_;
  double margin_;
  double x_ = 0.0;
  double y_ = 0.0;
  double heading_ = 0.0;
  bool moving_ = false;
  double speed_ = 0.0;
};

struct Blob {
  double x;
  double y;
  double sigma;
  double amplitude;
};

void add_blob(Grid& g, const Blob& b) {
  const double inv = 1.0 / (2.0 * b.sigma * b.sigma);
  for (std::size_t y = 0; y < g.height(); ++y) {
    for (std::size_t x = 0; x < g.width(); ++x) {
      const double dx = static_cast<double>(x) - b.x;
      const double dy = static_cast<double>(y) - b.y;
      g.at(x, y) += b.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
    }
  }
}

Grid render(const SynthOptions& o, std::span<const Blob> blobs) {
  Grid g(o.width, o.height, o.background);
  for (const Blob& b : blobs) add_blob(g, b);
  for (double& v : g.values()) v = std::clamp(v, 0.0, 1.0);
  return g;
}

double blob_motion(const SynthOptions& o, const Blob& before, const Blob& after) {
  return motion_energy(render(o, std::span<const Blob>(&before, 1)),
                          render(o, std::span<const Blob>(&after, 1)));
}

std::vector<double> normalized(std::vector<double> v) {
  const double peak = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  if (peak > 0.0) {
    for (double& x : v) x /= peak;
  }
  return v;
}

// Piecewise-linear interpolation of a per-frame envelope at time t (frames).
double envelope_at(const std::vector<double>& env, double t) {
  if (t <= 0.0) return env.front();
  const auto lo = static_cast<std::size_t>(t);
  if (lo + 1 >= env.size()) return env.back();
  const double frac = t - static_cast<double>(lo);
  return (1.0 - frac) * env[lo] + frac * env[lo + 1];
}

// Removes from `env` its least-squares projection onto `motion` over a
// window of about one second around each frame, then lifts the result back
// to non-negative values.
std::vector<double> decorrelate(const std::vector<double>& env, const std::vector<double>& motion,
                                double fps) {
  const std::size_t n = env.size();
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(fps)), 2, n);
  std::vector<double> out(n);
  for (std::size_t f = 0; f < n; ++f) {
    const std::size_t start = std::min(f - std::min(f, w / 2), n - w);
    double me = 0.0;
    double mm = 0.0;
    for (std::size_t j = start; j < start + w; ++j) {
      me += env[j];
      mm += motion[j];
    }
    me /= static_cast<double>(w);
    mm /= static_cast<double>(w);
    double cov = 0.0;
    double var = 0.0;
    for (std::size_t j = start; j < start + w; ++j) {
      cov += (env[j] - me) * (motion[j] - mm);
      var += (motion[j] - mm) * (motion[j] - mm);
    }
    const double beta = var > 0.0 ? cov / var : 0.0;
    out[f] = env[f] - beta * motion[f];
  }
  const double lowest = *std::min_element(out.begin(), out.end());
  for (double& v : out) v -= std::min(lowest, 0.0);
  return normalized(std::move(out));
}

}  // namespace

std::string_view scenario_name(Scenario s) noexcept {
  return kScenarioNames[static_cast<std::size_t>(s)];
}

Scenario parse_scenario(std::string_view name) {
  for (std::size_t i = 0; i < kScenarioCount; ++i) {
    if (kScenarioNames[i] == name) return static_cast<Scenario>(i);
  }
  throw Error(ErrorCode::kBadScenario, "unknown scenario '" + std::string(name) + "'");
}

int scenario_label(Scenario s) noexcept { return s == Scenario::kOnScreenSounding ? 1 : 0; }

SyntheticClip synthesize_clip(Scenario scenario, std::size_t n_frames, std::uint64_t seed,
                              const SynthOptions& o) {
  if (static_cast<std::size_t>(scenario) >= kScenarioCount) {
    throw Error(ErrorCode::kBadScenario, "scenario out of range");
  }
  if (n_frames < 8) throw Error(ErrorCode::kInvalidArgument, "synthetic clips need >= 8 frames");
  if (o.width < 8 || o.height < 8) throw Error(ErrorCode::kInvalidArgument, "frame must be >= 8x8");
  if (!(o.fps > 0.0) || !(o.sample_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fps and sample rate must be positive");
  }

  SyntheticClip clip;
  clip.scenario = scenario;
  clip.fps = o.fps;

  const double target_margin = 2.0 * o.target_sigma;
  Mover target(Rng(derive_seed(seed, 1)), o, target_margin);
  std::vector<Mover> distractors;
  for (std::size_t d = 0; d < o.distractors; ++d) {
    distractors.emplace_back(Rng(derive_seed(seed, 2 + d)), o, 2.0 * o.distractor_sigma);
  }
  Mover hidden(Rng(derive_seed(seed, 100)), o, target_margin);

  const auto target_blob = [&] { return Blob{target.x(), target.y(), o.target_sigma, o.target_amplitude}; };
  const auto hidden_blob = [&] { return Blob{hidden.x(), hidden.y(), o.target_sigma, o.target_amplitude}; };

  // Pre-roll step so frame 0 has a defined motion value.
  Blob prev_target = target_blob();
  Blob prev_hidden = hidden_blob();
  std::vector<double> hidden_motion;
  for (std::size_t f = 0; f < n_frames; ++f) {
    target.step();
    hidden.step();
    for (Mover& d : distractors) d.step();

    std::vector<Blob> blobs{target_blob()};
    for (const Mover& d : distractors) {
      blobs.push_back({d.x(), d.y(), o.distractor_sigma, o.distractor_amplitude});
    }
    clip.frames.push_back(render(o, blobs));
    clip.target_centers.push_back({target.x(), target.y()});
    clip.source_motion.push_back(blob_motion(o, prev_target, blobs[0]));
    hidden_motion.push_back(blob_motion(o, prev_hidden, hidden_blob()));
    prev_target = blobs[0];
    prev_hidden = hidden_blob();
  }

  Rng phase_rng(derive_seed(seed, 101));
  switch (scenario) {
    case Scenario::kOnScreenSounding:
      clip.audio_envelope = normalized(clip.source_motion);
      break;
    case Scenario::kOffScreenAudio:
      clip.audio_envelope = decorrelate(normalized(hidden_motion), clip.source_motion, o.fps);
      break;
    case Scenario::kBackgroundMusic: {
      const double phase = phase_rng.uniform(0.0, 2.0 * std::numbers::pi);
      clip.audio_envelope.resize(n_frames);
      for (std::size_t f = 0; f < n_frames; ++f) {
        const double t = static_cast<double>(f) / o.fps;
        clip.audio_envelope[f] = 0.2 + 0.3 * (1.0 + std::cos(2.0 * std::numbers::pi * 2.0 * t + phase));
      }
      clip.audio_envelope = decorrelate(clip.audio_envelope, clip.source_motion, o.fps);
      break;
    }
    case Scenario::kSilent:
      clip.audio_envelope.assign(n_frames, 0.0);
      break;
  }

  const auto n_samples =
      static_cast<std::size_t>(std::llround(static_cast<double>(n_frames) * o.sample_rate / o.fps));
  clip.audio.sample_rate = o.sample_rate;
  clip.audio.samples.assign(n_samples, 0.0);
  if (scenario != Scenario::kSilent) {
    Rng noise(derive_seed(seed, 102));
    constexpr std::array<double, 3> kChord = {261.63, 329.63, 392.0};
    for (std::size_t n = 0; n < n_samples; ++n) {
      const double t = static_cast<double>(n) / o.sample_rate;
      const double amp = 0.8 * envelope_at(clip.audio_envelope, t * o.fps);
      double carrier = 0.0;
      if (scenario == Scenario::kBackgroundMusic) {
        for (double hz : kChord) carrier += std::sin(2.0 * std::numbers::pi * hz * t);
        carrier /= static_cast<double>(kChord.size());
      } else {
        carrier = std::sin(2.0 * std::numbers::pi * o.tone_hz * t);
      }
      clip.audio.samples[n] = std::clamp(amp * carrier + o.audio_noise * noise.normal(), -1.0, 1.0);
    }
  }

  Rng jitter(derive_seed(seed, 103));
  const FrameSize size{o.width, o.height};
  for (std::size_t f = 0; f < n_frames; ++f) {
    std::vector<Point> points;
    for (std::size_t k = 0; k < o.fixations_per_frame; ++k) {
      const double x = std::round(clip.target_centers[f][0] + jitter.normal(0.0, o.jitter_px));
      const double y = std::round(clip.target_centers[f][1] + jitter.normal(0.0, o.jitter_px));
      points.push_back({static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(o.width - 1))),
                        static_cast<std::size_t>(std::clamp(y, 0.0, static_cast<double>(o.height - 1)))});
    }
    clip.gt_fixations.push_back(FixationSet::deduplicated(size, std::move(points)));
  }

  clip.gt_avc.labels.assign(n_frames, scenario_label(scenario));
  return clip;
}

ScenarioMix parse_scenario_mix(std::string_view text) {
  ScenarioMix mix{};
  std::array<bool, kScenarioCount> seen{};
  for (std::string_view item : split_csv_line(text)) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfigError, "mix entry '" + std::string(item) + "' needs name=fraction");
    }
    const Scenario s = parse_scenario(trim(item.substr(0, eq)));
    const auto value = parse_double(item.substr(eq + 1));
    if (!value || *value < 0.0) {
      throw Error(ErrorCode::kConfigError, "mix fraction for " + std::string(scenario_name(s)) +
                                               " must be a non-negative number");
    }
    if (seen[static_cast<std::size_t>(s)]) {
      throw Error(ErrorCode::kConfigError, "scenario listed twice in mix");
    }
    seen[static_cast<std::size_t>(s)] = true;
    mix[static_cast<std::size_t>(s)] = *value;
  }
  double total = 0.0;
  for (double v : mix) total += v;
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kConfigError, "mix fractions sum to " + format_double(total) + ", not 1");
  }
  return mix;
}

ScenarioMix consistency_mix(double consistent_fraction) {
  if (!(consistent_fraction >= 0.0 && consistent_fraction <= 1.0)) {
    throw Error(ErrorCode::kConfigError, "consistent fraction must be in [0, 1]");
  }
  const double rest = (1.0 - consistent_fraction) / 2.0;
  return {consistent_fraction, rest, rest, 0.0};
}

std::vector<Scenario> allocate_scenarios(const ScenarioMix& mix, std::size_t n_clips,
                                         std::uint64_t seed) {
  std::array<std::size_t, kScenarioCount> counts{};
  std::array<double, kScenarioCount> remainder{};
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < kScenarioCount; ++s) {
    const double exact = mix[s] * static_cast<double>(n_clips);
    counts[s] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[s] = exact - static_cast<double>(counts[s]);
    assigned += counts[s];
  }
  while (assigned < n_clips) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < kScenarioCount; ++s) {
      if (remainder[s] > remainder[best]) best = s;
    }
    ++counts[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  std::vector<Scenario> out;
  for (std::size_t s = 0; s < kScenarioCount; ++s) {
    out.insert(out.end(), counts[s], static_cast<Scenario>(s));
  }
  out.resize(n_clips);
  Rng rng(derive_seed(seed, 0xC11F));
  for (std::size_t i = out.size(); i > 1; --i) {
    std::swap(out[i - 1], out[rng.index(i)]);
  }
  return out;
}

std::vector<SyntheticClip> synthesize_dataset(const SyntheticDatasetSpec& spec) {
  const std::vector<Scenario> scenarios = allocate_scenarios(spec.mix, spec.n_clips, spec.seed);
  std::vector<SyntheticClip> clips;
  clips.reserve(scenarios.size());
  for (std::size_t c = 0; c < scenarios.size(); ++c) {
    clips.push_back(synthesize_clip(scenarios[c], spec.n_frames, derive_seed(spec.seed, 1000 + c),
                                    spec.options));
  }
  return clips;
}

DatasetManifest write_synthetic_dataset(const std::filesystem::path& out_dir,
                                        const SyntheticDatasetSpec& spec) {
  const std::vector<SyntheticClip> clips = synthesize_dataset(spec);
  DatasetManifest manifest;
  manifest.name = spec.name;
  manifest.base_dir = out_dir;
  manifest.pixels_per_degree = spec.options.pixels_per_degree;
  for (std::size_t c = 0; c < clips.size(); ++c) {
    const SyntheticClip& clip = clips[c];
    std::string id = std::to_string(c);
    id = "clip_" + std::string(id.size() < 3 ? 3 - id.size() : 0, '0') + id;

    VideoEntry v;
    v.id = id;
    v.frame_count = clip.frames.size();
    v.fps = clip.fps;
    v.frame_size = clip.frames.front().size();
    v.frame_pattern = id + "/frames/%05d.pgm";
    v.audio = id + "/audio.wav";
    v.fixations = id + "/fixations.csv";
    v.avc = id + "/avc.csv";

    for (std::size_t f = 0; f < clip.frames.size(); ++f) {
      write_pgm(out_dir / format_frame_path(v.frame_pattern, f), clip.frames[f]);
    }
    write_wav(out_dir / v.audio, clip.audio);
    write_fixation_csv(out_dir / v.fixations, clip.gt_fixations);
    AvcLabelTrack track = clip.gt_avc;
    track.video_id = id;
    save_avc_labels(out_dir / v.avc, track);

    manifest.videos.push_back(std::move(v));
  }
  manifest.declared_video_count = manifest.videos.size();
  manifest.declared_frame_count = manifest.summed_frame_count();
  save_manifest(out_dir / kManifestFileName, manifest);
  return manifest;
}

}  // namespace avcgate
