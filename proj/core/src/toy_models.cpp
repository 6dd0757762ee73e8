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
#include <fstream>
#include <numeric>
#include <string>

#include "avcgate/error.hpp"
#include "avcgate/map_io.hpp"
#include "avcgate/random.hpp"
#include "avcgate/text.hpp"

namespace avcgate {
namespace {

// Gaussian blur renormalized by the in-frame kernel mass, so constant
// regions stay constant up to the border.
Grid normalized_blur(const Grid& g, double sigma) {
  const Grid num = gaussian_blur(g, sigma);
  const Grid den = gaussian_blur(Grid(g.width(), g.height(), 1.0), sigma);
  Grid out(g.width(), g.height());
  for (std::size_t i = 0; i < g.area(); ++i) out[i] = num[i] / den[i];
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  double cov = 0.0;
  double va = 0.0;
  double vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(va > 0.0) || !(vb > 0.0)) return 0.0;
  return std::clamp(cov / std::sqrt(va * vb), -1.0, 1.0);
}

std::vector<bool> onsets(std::span<const double> env) {
  std::vector<bool> out(env.size(), false);
  if (env.size() < 2) return out;
  const auto [lo, hi] = std::minmax_element(env.begin(), env.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t k = 1; k < env.size(); ++k) {
    out[k] = env[k] - env[k - 1] > 0.2 * range;
  }
  return out;
}

}  // namespace

Grid center_bias_prior(std::size_t width, std::size_t height, double sigma_fraction) {
  Grid prior(width, height);
  const double sigma = sigma_fraction * static_cast<double>(std::min(width, height));
  const double cx = (static_cast<double>(width) - 1.0) / 2.0;
  const double cy = (static_cast<double>(height) - 1.0) / 2.0;
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      const double dx = static_cast<double>(x) - cx;
      const double dy = static_cast<double>(y) - cy;
      prior.at(x, y) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
    }
  }
  const double peak = prior.max();
  for (double& v : prior.values()) v /= peak;
  return prior;
}

SaliencyMap predict_visual_saliency(const Grid& frame, const VisualSaliencyOptions& options) {
  if (frame.width() < 8 || frame.height() < 8) {
    throw Error(ErrorCode::kTooSmall, "frame must be at least 8x8");
  }
  Grid contrast(frame.width(), frame.height());
  for (const auto& [center_sigma, surround_sigma] : options.scales) {
    const Grid center = normalized_blur(frame, center_sigma);
    const Grid surround = normalized_blur(frame, surround_sigma);
    for (std::size_t i = 0; i < frame.area(); ++i) contrast[i] += std::abs(center[i] - surround[i]);
  }
  // Anything at rounding level is treated as no contrast at all.
  const double peak = contrast.max();
  const double range = std::max(frame.max() - frame.min(), std::abs(frame.max()));
  if (peak > 1e-9 * std::max(range, 1e-300)) {
    for (double& v : contrast.values()) v /= peak;
  } else {
    std::fill(contrast.values().begin(), contrast.values().end(), 0.0);
  }

  const Grid prior = center_bias_prior(frame.width(), frame.height(), options.prior_sigma_fraction);
  Grid out(frame.width(), frame.height());
  for (std::size_t i = 0; i < frame.area(); ++i) {
    out[i] = options.contrast_weight * contrast[i] + options.prior_weight * prior[i];
  }
  const double top = out.max();
  if (top > 0.0) {
    for (double& v : out.values()) v /= top;
  }
  return SaliencyMap(std::move(out));
}

double motion_energy(const Grid& previous, const Grid& current) {
  if (previous.size() != current.size()) {
    throw Error(ErrorCode::kShapeMismatch, "motion energy on frames of different sizes");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < current.area(); ++i) acc += std::abs(current[i] - previous[i]);
  return acc / static_cast<double>(current.area());
}

std::vector<double> audio_energy_envelope(const MelSpectrogram& mel, std::size_t points) {
  if (points == 0 || mel.frames < points) {
    throw Error(ErrorCode::kShapeMismatch, "mel slice has " + std::to_string(mel.frames) +
                                               " rows for " + std::to_string(points) +
                                               " envelope points");
  }
  std::vector<double> row_energy(mel.frames, 0.0);
  for (std::size_t f = 0; f < mel.frames; ++f) {
    for (std::size_t b = 0; b < mel.n_mels; ++b) row_energy[f] += mel.energy(f, b);
  }
  std::vector<double> env(points, 0.0);
  for (std::size_t k = 0; k < points; ++k) {
    const std::size_t begin = k * mel.frames / points;
    const std::size_t end = (k + 1) * mel.frames / points;
    for (std::size_t f = begin; f < end; ++f) env[k] += row_energy[f];
    env[k] /= static_cast<double>(end - begin);
  }
  return env;
}

AvcFeature extract_avc_features(const MelSpectrogram& mel_slice, std::span<const Grid> frames) {
  if (frames.size() < 2) {
    throw Error(ErrorCode::kShapeMismatch, "need at least two frames for motion");
  }
  const FrameSize size = frames[0].size();
  for (const Grid& f : frames) {
    if (f.size() != size) throw Error(ErrorCode::kShapeMismatch, "frames differ in size");
  }
  const std::size_t steps = frames.size() - 1;
  const std::vector<double> audio = audio_energy_envelope(mel_slice, steps);

  // Per-pixel absolute differences, kept for the salient-region pooling.
  std::vector<Grid> diffs;
  diffs.reserve(steps);
  std::vector<double> global(steps, 0.0);
  Grid mean_motion(size.width, size.height);
  for (std::size_t k = 0; k < steps; ++k) {
    Grid d(size.width, size.height);
    for (std::size_t i = 0; i < d.area(); ++i) {
      d[i] = std::abs(frames[k + 1][i] - frames[k][i]);
      mean_motion[i] += d[i];
    }
    global[k] = d.sum() / static_cast<double>(d.area());
    diffs.push_back(std::move(d));
  }

  AvcFeature out;
  out.audio_energy_corr = pearson(audio, global);

  const double peak = mean_motion.max();
  std::vector<double> region(steps, 0.0);
  if (peak > 0.0) {
    for (std::size_t k = 0; k < steps; ++k) {
      double acc = 0.0;
      std::size_t count = 0;
      for (std::size_t i = 0; i < mean_motion.area(); ++i) {
        if (mean_motion[i] >= 0.5 * peak) {
          acc += diffs[k][i];
          ++count;
        }
      }
      region[k] = acc / static_cast<double>(count);
    }
  }
  const auto centered = [](std::vector<double> v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= m;
    return v;
  };
  const std::vector<double> ca = centered(audio);
  const std::vector<double> cr = centered(region);
  const double na = std::sqrt(std::inner_product(ca.begin(), ca.end(), ca.begin(), 0.0));
  const double nr = std::sqrt(std::inner_product(cr.begin(), cr.end(), cr.begin(), 0.0));
  if (na > 0.0 && nr > 0.0) {
    out.embed_cos =
        std::clamp(std::inner_product(ca.begin(), ca.end(), cr.begin(), 0.0) / (na * nr), -1.0, 1.0);
  }

  const std::vector<bool> audio_onsets = onsets(audio);
  const std::vector<bool> motion_onsets = onsets(global);
  std::size_t n_audio = 0;
  std::size_t matched = 0;
  for (std::size_t k = 0; k < steps; ++k) {
    if (!audio_onsets[k]) continue;
    ++n_audio;
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = std::min(k + 1, steps - 1);
    for (std::size_t j = lo; j <= hi; ++j) {
      if (motion_onsets[j]) {
        ++matched;
        break;
      }
    }
  }
  out.onset_coincidence =
      n_audio == 0 ? 0.0 : static_cast<double>(matched) / static_cast<double>(n_audio);
  return out;
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double AvcClassifier::logit(const AvcFeature& f) const {
  const auto x = f.as_array();
  double z = bias;
  for (std::size_t i = 0; i < kAvcFeatureCount; ++i) z += weights[i] * x[i];
  return z;
}

double AvcClassifier::score(const AvcFeature& f) const { return sigmoid(logit(f)); }

ClassifierParams to_params(const AvcClassifier& clf) {
  ClassifierParams p{};
  std::copy(clf.weights.begin(), clf.weights.end(), p.begin());
  p.back() = clf.bias;
  return p;
}

AvcClassifier from_params(const ClassifierParams& params) {
  AvcClassifier clf;
  std::copy_n(params.begin(), kAvcFeatureCount, clf.weights.begin());
  clf.bias = params.back();
  return clf;
}

double cross_entropy_loss(double score, int label) {
  if (label != 0 && label != 1) {
    throw Error(ErrorCode::kInvalidLabel, "cross-entropy label must be 0 or 1");
  }
  const double s = std::clamp(score, kCrossEntropyEps, 1.0 - kCrossEntropyEps);
  return label == 1 ? -std::log(s) : -std::log(1.0 - s);
}

double classifier_loss(const ClassifierParams& params, std::span<const LabeledFeature> data) {
  const AvcClassifier clf = from_params(params);
  double acc = 0.0;
  for (const LabeledFeature& d : data) acc += cross_entropy_loss(clf.score(d.feature), d.label);
  return acc / static_cast<double>(data.size());
}

ClassifierParams classifier_gradient(const ClassifierParams& params,
                                     std::span<const LabeledFeature> data) {
  const AvcClassifier clf = from_params(params);
  ClassifierParams grad{};
  for (const LabeledFeature& d : data) {
    const double s = clf.score(d.feature);
    // Inside the clamp the loss is the plain logistic loss; outside it the
    // loss is flat in the score.
    if (s < kCrossEntropyEps || s > 1.0 - kCrossEntropyEps) continue;
    const double residual = s - static_cast<double>(d.label);
    const auto x = d.feature.as_array();
    for (std::size_t i = 0; i < kAvcFeatureCount; ++i) grad[i] += residual * x[i];
    grad.back() += residual;
  }
  for (double& g : grad) g /= static_cast<double>(data.size());
  return grad;
}

double classifier_accuracy(const AvcClassifier& clf, std::span<const LabeledFeature> data,
                           double threshold) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const LabeledFeature& d : data) {
    if (predict_avc(clf, d.feature, threshold).lc() == d.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

TrainingResult train_avc_classifier(std::span<const LabeledFeature> data,
                                    const TrainOptions& options) {
  if (!(options.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  bool seen[2] = {false, false};
  for (const LabeledFeature& d : data) {
    if (d.label != 0 && d.label != 1) throw Error(ErrorCode::kInvalidLabel, "labels must be 0 or 1");
    seen[d.label] = true;
  }
  if (!seen[0] || !seen[1]) {
    throw Error(ErrorCode::kSingleClass, "training data must contain both labels");
  }

  Rng rng(options.seed);
  ClassifierParams params{};
  for (double& p : params) p = rng.normal(0.0, 0.01);

  TrainingResult result;
  result.log.reserve(options.epochs);
  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    const ClassifierParams grad = classifier_gradient(params, data);
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= options.learning_rate * grad[i];
    const double loss = classifier_loss(params, data);
    if (!std::isfinite(loss) ||
        !std::all_of(params.begin(), params.end(), [](double p) { return std::isfinite(p); })) {
      throw Error(ErrorCode::kDiverged, "loss became non-finite at epoch " + std::to_string(epoch));
    }
    result.log.push_back({epoch, loss, classifier_accuracy(from_params(params), data)});
  }
  result.classifier = from_params(params);
  result.train_accuracy = classifier_accuracy(result.classifier, data);
  return result;
}

GateDecision predict_avc(const AvcClassifier& clf, const AvcFeature& f, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must be in (0, 1)");
  }
  return binarize_score(clf.score(f), threshold);
}

std::vector<LabeledFeature> synthesize_separable_features(std::size_t n, double margin,
                                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledFeature> out;
  out.reserve(n);
  const double norm = std::sqrt(2.0);
  while (out.size() < n) {
    AvcFeature f;
    f.audio_energy_corr = rng.uniform(-1.0, 1.0);
    f.embed_cos = rng.uniform(-1.0, 1.0);
    f.onset_coincidence = rng.uniform();
    const double distance = (f.audio_energy_corr + f.embed_cos) / norm;
    if (std::abs(distance) < margin) continue;
    out.push_back({f, distance > 0.0 ? 1 : 0});
  }
  return out;
}

namespace {

constexpr std::array<const char*, kAvcFeatureCount + 1> kParamNames = {
    "w_audio_energy_corr", "w_embed_cos", "w_onset_coincidence", "bias"};

}  // namespace

void write_classifier_csv(const std::filesystem::path& path, const AvcClassifier& clf) {
  const ClassifierParams p = to_params(clf);
  std::string out = "name,value\n";
  for (std::size_t i = 0; i < p.size(); ++i) {
    out += std::string(kParamNames[i]) + "," + format_double(p[i]) + "\n";
  }
  write_file_bytes(path, out);
}

AvcClassifier read_classifier_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  ClassifierParams p{};
  bool have[kAvcFeatureCount + 1] = {};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || (line_no == 1 && t == "name,value")) continue;
    const auto fields = split_csv_line(t);
    const auto value = fields.size() == 2 ? parse_double(fields[1]) : std::nullopt;
    if (!value) {
      throw Error(ErrorCode::kParseError, path.string() + ":" + std::to_string(line_no));
    }
    const auto it = std::find_if(kParamNames.begin(), kParamNames.end(),
                                 [&](const char* n) { return fields[0] == n; });
    if (it == kParamNames.end()) {
      throw Error(ErrorCode::kParseError, path.string() + ":" + std::to_string(line_no) +
                                              ": unknown parameter");
    }
    const auto idx = static_cast<std::size_t>(it - kParamNames.begin());
    p[idx] = *value;
    have[idx] = true;
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!have[i]) throw Error(ErrorCode::kMissingField, std::string(kParamNames[i]));
  }
  return from_params(p);
}

void write_training_log_csv(const std::filesystem::path& path,
                            std::span<const TrainingLogEntry> log) {
  std::string out = "epoch,loss,accuracy\n";
  for (const TrainingLogEntry& e : log) {
    out += std::to_string(e.epoch) + "," + format_double(e.loss) + "," +
           format_double(e.accuracy) + "\n";
  }
  write_file_bytes(path, out);
}

double kl_loss(const SaliencyMap& pred, const FixationDensity& gt, double eps) {
  if (pred.size() != gt.size()) throw Error(ErrorCode::kShapeMismatch, "kl_loss size mismatch");
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "kl_loss eps must be > 0");
  const auto p = pred.values();
  const auto g = gt.values();
  const double n = static_cast<double>(p.size());
  const double p_raw = std::accumulate(p.begin(), p.end(), 0.0);
  if (!(p_raw > 0.0)) throw Error(ErrorCode::kZeroMass, "kl_loss prediction has zero mass");
  const double g_raw = std::accumulate(g.begin(), g.end(), 0.0);
  const double p_mass = 1.0 + eps * n;
  const double g_mass = 1.0 + eps * n;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double gi = (g[i] / g_raw + eps) / g_mass;
    const double pi = (p[i] / p_raw + eps) / p_mass;
    acc += gi * std::log(gi / pi);
  }
  return std::max(acc, 0.0);
}

double combined_loss(double l_cls, double l_avsd, const LossConfig& config) {
  if (!(config.rho >= 0.0 && config.rho <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "rho must be in [0, 1]");
  }
  return (1.0 - config.rho) * l_cls + config.rho * l_avsd;
}

}  // namespace avcgate
