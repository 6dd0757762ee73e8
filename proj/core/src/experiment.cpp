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

#include "avcgate/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "avcgate/error.hpp"
#include "avcgate/map_io.hpp"
#include "avcgate/random.hpp"
#include "avcgate/text.hpp"

namespace avcgate {
namespace {

constexpr std::array<std::string_view, 3> kSchemeNames = {"concat", "spatial_align", "bilinear"};
constexpr std::array<std::string_view, kGateModeCount> kModeNames = {
    "v_only", "always_fuse", "gated_predicted", "gated_ideal"};

constexpr double kMotionBlurSigma = 1.0;
constexpr double kReadoutBlurSigma = 1.0;
// Envelope deviations are scaled by max(std, kQuietFloor * mean) so that a
// near-constant hum does not get stretched to unit variance.
constexpr double kQuietFloor = 0.25;
constexpr double kConstantLogit = 10.0;

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
}

// Index of the frame before motion step `step` of the window around `anchor`.
std::size_t context_start(std::size_t anchor, std::size_t k, std::size_t step, std::size_t n) {
  return clamp_index(static_cast<std::ptrdiff_t>(anchor) - static_cast<std::ptrdiff_t>(k / 2) - 1 +
                         static_cast<std::ptrdiff_t>(step),
                     n);
}

Grid normalized_to_peak(Grid g) {
  const double peak = g.max();
  if (peak > 0.0) {
    for (double& v : g.values()) v /= peak;
  }
  return g;
}

Grid channel_mean(const FeatureTensor& v) {
  Grid g(v.width(), v.height());
  for (std::size_t c = 0; c < v.channels(); ++c) {
    const auto plane = v.plane(c);
    for (std::size_t p = 0; p < plane.size(); ++p) g[p] += plane[p];
  }
  for (double& x : g.values()) x /= static_cast<double>(v.channels());
  return g;
}

Grid visual_map(const Grid& frame, const FeatureTensor& v) {
  const SaliencyMap stat = predict_visual_saliency(frame);
  const Grid motion = normalized_to_peak(gaussian_blur(channel_mean(v), kMotionBlurSigma));
  Grid out(frame.width(), frame.height());
  for (std::size_t p = 0; p < out.area(); ++p) out[p] = 0.5 * stat.grid()[p] + 0.5 * motion[p];
  return out;
}

BilinearTransform banded_transform(std::size_t k) {
  std::vector<double> m(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    m[i * k + i] = 1.0;
    if (i > 0) m[i * k + i - 1] = 0.5;
    if (i + 1 < k) m[i * k + i + 1] = 0.5;
  }
  return BilinearTransform(k, k, std::move(m));
}

Grid readout(const FeatureTensor& v, const FeatureVector& a, FusionScheme scheme, bool residual,
             const BilinearTransform* bilinear) {
  Grid r(v.width(), v.height());
  const std::size_t k = v.channels();
  const std::size_t plane = v.plane_size();
  switch (scheme) {
    case FusionScheme::kConcat: {
      const FeatureTensor x = fuse_concat(v, a);
      const auto vals = x.values();
      for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t p = 0; p < plane; ++p) {
          r[p] += vals[c * plane + p] * vals[(k + c) * plane + p];
          if (residual) r[p] += vals[c * plane + p];
        }
      }
      break;
    }
    case FusionScheme::kSpatialAlign: {
      const FeatureTensor x = fuse_spatial_align(v, a, residual);
      for (std::size_t c = 0; c < k; ++c) {
        const auto pl = x.plane(c);
        for (std::size_t p = 0; p < plane; ++p) r[p] += pl[p];
      }
      break;
    }
    case FusionScheme::kBilinear: {
      std::vector<double> column(k);
      for (std::size_t p = 0; p < plane; ++p) {
        for (std::size_t c = 0; c < k; ++c) column[c] = v.values()[c * plane + p];
        const FeatureVector out = fuse_bilinear(FeatureVector(column), a, *bilinear);
        for (std::size_t c = 0; c < k; ++c) {
          r[p] += out[c];
          if (residual) r[p] += column[c];
        }
      }
      break;
    }
  }
  return r;
}

Grid fused_map(const Grid& visual, const Grid& r, double weight) {
  Grid positive = r;
  for (double& x : positive.values()) x = std::max(x, 0.0);
  const Grid guided = normalized_to_peak(gaussian_blur(positive, kReadoutBlurSigma));
  Grid out(visual.width(), visual.height());
  for (std::size_t p = 0; p < out.area(); ++p) {
    out[p] = visual[p] * ((1.0 - weight) + weight * guided[p]);
  }
  return out;
}

std::array<double, kMetricCount> report_means(const MetricReport& report) { return report.mean; }

std::string aligned(std::span<const std::vector<std::string>> rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        out << row[c] << std::string(widths[c] - row[c].size(), ' ');
      } else {
        out << "  " << std::string(widths[c] - row[c].size(), ' ') << row[c];
      }
    }
    out << '\n';
  }
  return out.str();
}

std::string cell(double v, int digits = 4) {
  return std::isnan(v) ? std::string("-") : format_fixed(v, digits);
}

std::string signed_cell(double v) {
  if (std::isnan(v)) return "-";
  return (v >= 0.0 ? "+" : "") + format_fixed(v, 4);
}

}  // namespace

std::string_view fusion_scheme_name(FusionScheme s) noexcept {
  return kSchemeNames[static_cast<std::size_t>(s)];
}

FusionScheme parse_fusion_scheme(std::string_view name) {
  for (std::size_t i = 0; i < kSchemeNames.size(); ++i) {
    if (kSchemeNames[i] == name) return static_cast<FusionScheme>(i);
  }
  throw Error(ErrorCode::kConfigError,
              "scheme: unknown fusion scheme '" + std::string(name) +
                  "' (expected concat, spatial_align or bilinear)");
}

std::string_view gate_mode_name(GateMode m) noexcept {
  return kModeNames[static_cast<std::size_t>(m)];
}

GateMode parse_gate_mode(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == name) return static_cast<GateMode>(i);
  }
  throw Error(ErrorCode::kConfigError, "gate mode: unknown mode '" + std::string(name) + "'");
}

ClipData clip_from_synthetic(const SyntheticClip& clip, std::string id, const ClipOptions& options) {
  ClipData out;
  out.id = std::move(id);
  out.fps = clip.fps;
  out.frames = clip.frames;
  const MelSpectrogram mel = compute_mel(clip.audio, options.mel);
  FrameAlignOptions align = options.align;
  align.window = options.mel.window;
  out.audio = frame_align(mel, clip.fps, options.mel.hop, options.mel.sample_rate,
                          clip.frames.size(), align);
  for (const FixationSet& fix : clip.gt_fixations) {
    out.ground_truth.push_back({fix, density_from_fixations(fix, options.blur)});
  }
  out.avc_labels = clip.gt_avc.labels;
  return out;
}

std::vector<ClipData> load_clips(const DatasetManifest& manifest, const ClipOptions& options) {
  InstanceOptions io;
  io.mel = options.mel;
  io.align = options.align;
  io.blur = options.blur;
  io.load_frames = true;
  std::map<std::string, double> fps;
  for (const VideoEntry& v : manifest.videos) fps[v.id] = v.fps;

  std::vector<ClipData> clips;
  InstanceStream stream(manifest, io);
  while (auto inst = stream.next()) {
    if (clips.empty() || clips.back().id != inst->video_id) {
      clips.emplace_back();
      clips.back().id = inst->video_id;
      clips.back().fps = fps.at(inst->video_id);
    }
    if (!inst->density) {
      throw Error(ErrorCode::kMissingField, "video " + inst->video_id + " frame " +
                                                std::to_string(inst->frame_index) +
                                                " has no fixations");
    }
    ClipData& c = clips.back();
    c.frames.push_back(std::move(inst->frame));
    c.audio.push_back(std::move(inst->audio));
    c.ground_truth.push_back({std::move(inst->fixations), std::move(*inst->density)});
    c.avc_labels.push_back(inst->avc_label);
  }
  return clips;
}

void validate_config(const ExperimentConfig& c) {
  const auto fail = [](std::string_view field, std::string_view what) {
    throw Error(ErrorCode::kConfigError, std::string(field) + ": " + std::string(what));
  };
  if (!(c.audio_gain > 0.0) || !std::isfinite(c.audio_gain)) fail("audio_gain", "must be positive");
  if (!(c.fusion_weight > 0.0 && c.fusion_weight < 1.0)) fail("fusion_weight", "must be in (0, 1)");
  if (!(c.context_seconds > 0.0) || !std::isfinite(c.context_seconds)) {
    fail("context_seconds", "must be positive");
  }
  if (!(c.train_fraction > 0.0 && c.train_fraction < 1.0)) fail("train_fraction", "must be in (0, 1)");
  if (!(c.gate_threshold > 0.0 && c.gate_threshold < 1.0)) fail("gate_threshold", "must be in (0, 1)");
  if (c.train.epochs == 0) fail("epochs", "must be at least 1");
  if (!(c.train.learning_rate > 0.0)) fail("learning_rate", "must be positive");
  if (c.evaluation.metrics.empty()) fail("metrics", "at least one metric is required");
}

std::size_t context_anchor(std::size_t frame, std::size_t k, std::size_t n) {
  if (n < k + 1) return frame;
  return std::clamp(frame, k / 2 + 1, n - 1 - (k - k / 2 - 1));
}

std::size_t context_frames(double fps, double context_seconds) {
  return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(fps * context_seconds)));
}

FeatureTensor visual_context(const ClipData& clip, std::size_t frame, std::size_t k) {
  const std::size_t n = clip.frames.size();
  const Grid& ref = clip.frames.at(frame);
  const std::size_t anchor = context_anchor(frame, k, n);
  FeatureTensor t(k, ref.height(), ref.width());
  auto vals = t.values();
  for (std::size_t c = 0; c < k; ++c) {
    const Grid& a = clip.frames[context_start(anchor, k, c, n)];
    const Grid& b = clip.frames[context_start(anchor, k, c + 1, n)];
    for (std::size_t p = 0; p < ref.area(); ++p) vals[c * ref.area() + p] = std::abs(b[p] - a[p]);
  }
  return t;
}

FeatureVector audio_context(const MelSlice& slice, std::size_t k, double gain) {
  std::vector<double> env = audio_energy_envelope(slice.mel, k);
  double mean = 0.0;
  for (double& e : env) {
    e = std::sqrt(std::max(e, 0.0));
    mean += e;
  }
  mean /= static_cast<double>(k);
  double var = 0.0;
  for (double e : env) var += (e - mean) * (e - mean);
  const double scale = std::max(std::sqrt(var / static_cast<double>(k)), kQuietFloor * mean);
  for (double& e : env) e = scale > 0.0 ? gain * (e - mean) / scale : 0.0;
  return FeatureVector(std::move(env));
}

AvcFeature frame_features(const ClipData& clip, std::size_t frame, std::size_t k) {
  const std::size_t n = clip.frames.size();
  const std::size_t anchor = context_anchor(frame, k, n);
  std::vector<Grid> window;
  window.reserve(k + 1);
  for (std::size_t s = 0; s <= k; ++s) window.push_back(clip.frames.at(context_start(anchor, k, s, n)));
  return extract_avc_features(clip.audio.at(anchor).mel, window);
}

SaliencyDecoder make_toy_decoder(std::vector<const Grid*> frames, const ExperimentConfig& config) {
  std::shared_ptr<const BilinearTransform> bilinear;
  return [frames = std::move(frames), config, bilinear](
             std::size_t frame_index, const FeatureTensor& v,
             const FeatureVector* audio) mutable -> SaliencyMap {
    if (frame_index >= frames.size()) {
      throw Error(ErrorCode::kDecoderError, "no image for frame " + std::to_string(frame_index));
    }
    const Grid& frame = *frames[frame_index];
    if (frame.width() != v.width() || frame.height() != v.height()) {
      throw Error(ErrorCode::kShapeMismatch, "context tensor does not match the frame size");
    }
    const Grid visual = visual_map(frame, v);
    if (audio == nullptr) return SaliencyMap(visual);
    if (config.scheme == FusionScheme::kBilinear &&
        (!bilinear || bilinear->rows() != v.channels())) {
      bilinear = std::make_shared<const BilinearTransform>(banded_transform(v.channels()));
    }
    const Grid r = readout(v, *audio, config.scheme, config.residual, bilinear.get());
    return SaliencyMap(fused_map(visual, r, config.fusion_weight));
  };
}

void split_clips(std::span<const int> strata, double train_fraction, std::uint64_t seed,
                 std::vector<std::size_t>& train, std::vector<std::size_t>& test) {
  const std::size_t n_clips = strata.size();
  if (n_clips < 2) throw Error(ErrorCode::kConfigError, "clips: need at least 2 clips to split");
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < n_clips; ++i) groups[strata[i]].push_back(i);
  train.clear();
  test.clear();
  Rng rng(derive_seed(seed, 0x5B117));
  for (auto& [stratum, members] : groups) {
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.index(i)]);
    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(members.size())));
    train.insert(train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  // Tiny inputs can round a side down to nothing; move one clip across.
  if (train.empty()) {
    train.push_back(test.front());
    test.erase(test.begin());
  } else if (test.empty()) {
    test.push_back(train.back());
    train.pop_back();
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
}

ExperimentResult run_gate_experiment(std::span<const ClipData> clips, const ExperimentConfig& config) {
  validate_config(config);
  for (const ClipData& c : clips) {
    if (c.frames.empty() || c.frames.size() != c.audio.size() ||
        c.frames.size() != c.ground_truth.size() || c.frames.size() != c.avc_labels.size()) {
      throw Error(ErrorCode::kLengthMismatch, "clip " + c.id + ": frames, audio, fixations and labels differ in length");
    }
  }
  ExperimentResult result;
  std::vector<int> strata;
  for (const ClipData& c : clips) {
    const auto positives = std::count(c.avc_labels.begin(), c.avc_labels.end(), 1);
    strata.push_back(2 * static_cast<std::size_t>(positives) >= c.avc_labels.size() ? 1 : 0);
  }
  split_clips(strata, config.train_fraction, config.seed, result.train_clip_indices,
              result.test_clip_indices);

  if (config.classifier) {
    result.classifier = *config.classifier;
  } else {
    std::vector<LabeledFeature> data;
    for (std::size_t ci : result.train_clip_indices) {
      const ClipData& c = clips[ci];
      const std::size_t k = context_frames(c.fps, config.context_seconds);
      for (std::size_t f = 0; f < c.frames.size(); ++f) {
        data.push_back({frame_features(c, f, k), c.avc_labels[f]});
      }
    }
    TrainOptions train = config.train;
    train.seed = derive_seed(config.seed, train.seed);
    const bool single_class = std::all_of(data.begin(), data.end(), [&](const LabeledFeature& d) {
      return d.label == data.front().label;
    });
    if (single_class) {
      result.classifier.bias = data.front().label == 1 ? kConstantLogit : -kConstantLogit;
      result.table.train_accuracy = 1.0;
    } else {
      TrainingResult trained = train_avc_classifier(data, train);
      result.classifier = trained.classifier;
      result.training_log = std::move(trained.log);
      result.table.train_accuracy = trained.train_accuracy;
    }
  }

  std::vector<FrameGroundTruth> truth;
  auto& streams = result.streams;
  for (std::size_t ci : result.test_clip_indices) {
    const ClipData& c = clips[ci];
    const std::size_t k = context_frames(c.fps, config.context_seconds);
    std::vector<GatedFrame> frames;
    std::vector<const Grid*> images;
    frames.reserve(c.frames.size());
    for (std::size_t f = 0; f < c.frames.size(); ++f) {
      GatedFrame g;
      g.visual = visual_context(c, f, k);
      g.audio = audio_context(c.audio[context_anchor(f, k, c.frames.size())], k, config.audio_gain);
      g.decision = predict_avc(result.classifier, frame_features(c, f, k), config.gate_threshold);
      result.predicted.push_back(g.decision);
      result.ideal.emplace_back(c.avc_labels[f], GateSource::kLabel);
      result.frame_video.push_back(c.id);
      result.frame_index.push_back(f);
      truth.push_back(c.ground_truth[f]);
      images.push_back(&c.frames[f]);
      frames.push_back(std::move(g));
    }
    GatedStreams out;
    try {
      out = run_gated_pipeline(frames, make_toy_decoder(std::move(images), config));
    } catch (const Error& e) {
      throw Error(e.code(), "clip " + c.id + ": " + e.detail());
    }
    const std::size_t offset = streams[0].size();
    for (std::size_t f = 0; f < out.v_only.size(); ++f) {
      streams[static_cast<std::size_t>(GateMode::kGatedIdeal)].push_back(
          gate_output(result.ideal[offset + f], out.always_fuse[f], out.v_only[f]));
    }
    auto append = [](std::vector<SaliencyMap>& dst, std::vector<SaliencyMap>& src) {
      std::move(src.begin(), src.end(), std::back_inserter(dst));
    };
    append(streams[static_cast<std::size_t>(GateMode::kVOnly)], out.v_only);
    append(streams[static_cast<std::size_t>(GateMode::kAlwaysFuse)], out.always_fuse);
    append(streams[static_cast<std::size_t>(GateMode::kGatedPredicted)], out.gated);
  }

  AblationTable& table = result.table;
  table.metrics = config.evaluation.metrics;
  table.train_clips = result.train_clip_indices.size();
  table.test_clips = result.test_clip_indices.size();
  table.test_frames = truth.size();
  std::size_t agree = 0;
  for (std::size_t i = 0; i < result.predicted.size(); ++i) {
    agree += result.predicted[i].lc() == result.ideal[i].lc() ? 1 : 0;
  }
  table.classifier_accuracy =
      truth.empty() ? 0.0 : static_cast<double>(agree) / static_cast<double>(truth.size());
  if (config.classifier) {
    std::vector<LabeledFeature> data;
    for (std::size_t ci : result.train_clip_indices) {
      const ClipData& c = clips[ci];
      const std::size_t k = context_frames(c.fps, config.context_seconds);
      for (std::size_t f = 0; f < c.frames.size(); ++f) {
        data.push_back({frame_features(c, f, k), c.avc_labels[f]});
      }
    }
    table.train_accuracy = classifier_accuracy(result.classifier, data, config.gate_threshold);
  }

  for (GateMode m : kAllGateModes) {
    const auto i = static_cast<std::size_t>(m);
    table.rows[i].mode = m;
    table.rows[i].mean = report_means(evaluate_sequence(streams[i], truth, config.evaluation));
  }
  for (AblationRow& row : table.rows) {
    for (std::size_t j = 0; j < kMetricCount; ++j) row.delta[j] = row.mean[j] - table.rows[0].mean[j];
  }
  return result;
}

std::vector<SweepPoint> sweep_gate_accuracy(const ExperimentResult& result,
                                            std::span<const ClipData> clips,
                                            std::span<const double> accuracies,
                                            const ExperimentConfig& config) {
  std::vector<FrameGroundTruth> truth;
  for (std::size_t ci : result.test_clip_indices) {
    if (ci >= clips.size()) throw Error(ErrorCode::kLengthMismatch, "result does not match clips");
    truth.insert(truth.end(), clips[ci].ground_truth.begin(), clips[ci].ground_truth.end());
  }
  const auto& v_only = result.streams[static_cast<std::size_t>(GateMode::kVOnly)];
  const auto& fused = result.streams[static_cast<std::size_t>(GateMode::kAlwaysFuse)];
  const std::size_t n = result.ideal.size();
  if (truth.size() != n || v_only.size() != n || fused.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "result does not match clips");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(config.seed, 0xF11B));
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

  std::vector<SweepPoint> out;
  for (double acc : accuracies) {
    if (!(acc >= 0.0 && acc <= 1.0)) {
      throw Error(ErrorCode::kConfigError, "accuracy: sweep values must be in [0, 1]");
    }
    const auto flips = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::llround((1.0 - acc) * static_cast<double>(n))));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = result.ideal[i].lc();
    for (std::size_t i = 0; i < flips; ++i) labels[order[i]] = 1 - labels[order[i]];
    std::vector<SaliencyMap> gated;
    gated.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      gated.push_back(gate_output(GateDecision(labels[i], GateSource::kPredicted), fused[i], v_only[i]));
    }
    SweepPoint p;
    p.target_accuracy = acc;
    p.achieved_accuracy = n == 0 ? 0.0 : 1.0 - static_cast<double>(flips) / static_cast<double>(n);
    p.mean = evaluate_sequence(gated, truth, config.evaluation).mean;
    out.push_back(p);
  }
  return out;
}

std::string format_ablation_table(const AblationTable& table) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"mode"};
  for (Metric m : kAllMetrics) header.emplace_back(metric_name(m));
  for (Metric m : kAllMetrics) header.push_back("d" + std::string(metric_name(m)));
  rows.push_back(std::move(header));
  for (const AblationRow& r : table.rows) {
    std::vector<std::string> row{std::string(gate_mode_name(r.mode))};
    for (double v : r.mean) row.push_back(cell(v));
    for (double v : r.delta) row.push_back(signed_cell(v));
    rows.push_back(std::move(row));
  }
  std::string text = aligned(rows);
  text += "classifier accuracy (test frames): " + format_fixed(table.classifier_accuracy, 4) + "\n";
  text += "train accuracy: " + format_fixed(table.train_accuracy, 4) + "\n";
  text += "clips train/test: " + std::to_string(table.train_clips) + "/" +
          std::to_string(table.test_clips) + ", test frames: " + std::to_string(table.test_frames) + "\n";
  return text;
}

void write_ablation_csv(const std::filesystem::path& path, const AblationTable& table) {
  std::string csv = "mode";
  for (Metric m : kAllMetrics) csv += "," + std::string(metric_name(m));
  for (Metric m : kAllMetrics) csv += ",delta_" + std::string(metric_name(m));
  csv += '\n';
  for (const AblationRow& r : table.rows) {
    csv += gate_mode_name(r.mode);
    for (double v : r.mean) csv += "," + format_double(v);
    for (double v : r.delta) csv += "," + format_double(v);
    csv += '\n';
  }
  write_file_bytes(path, csv);
}

std::string format_sweep_table(std::span<const SweepPoint> sweep) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"accuracy"};
  for (Metric m : kAllMetrics) header.emplace_back(metric_name(m));
  rows.push_back(std::move(header));
  for (const SweepPoint& p : sweep) {
    std::vector<std::string> row{format_fixed(p.achieved_accuracy, 4)};
    for (double v : p.mean) row.push_back(cell(v));
    rows.push_back(std::move(row));
  }
  return aligned(rows);
}

void write_sweep_csv(const std::filesystem::path& path, std::span<const SweepPoint> sweep) {
  std::string csv = "target_accuracy,achieved_accuracy";
  for (Metric m : kAllMetrics) csv += "," + std::string(metric_name(m));
  csv += '\n';
  for (const SweepPoint& p : sweep) {
    csv += format_double(p.target_accuracy) + "," + format_double(p.achieved_accuracy);
    for (double v : p.mean) csv += "," + format_double(v);
    csv += '\n';
  }
  write_file_bytes(path, csv);
}

}  // namespace avcgate
