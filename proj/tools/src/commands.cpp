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

#include "avcgate_cli/commands.hpp"

#include <array>
#include <exception>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "avcgate/audio.hpp"
#include "avcgate/dataset.hpp"
#include "avcgate/error.hpp"
#include "avcgate/evaluation.hpp"
#include "avcgate/experiment.hpp"
#include "avcgate/fusion.hpp"
#include "avcgate/map_io.hpp"
#include "avcgate/metrics.hpp"
#include "avcgate/synth.hpp"
#include "avcgate/text.hpp"
#include "avcgate/toy_models.hpp"

namespace avcgate::cli {
namespace {

namespace fs = std::filesystem;

std::vector<Metric> parse_metric_list(const std::string& text) {
  std::vector<Metric> metrics;
  for (std::string_view item : split_csv_line(text)) {
    item = trim(item);
    if (item.empty()) continue;
    const auto m = parse_metric(item);
    if (!m) throw Error(ErrorCode::kConfigError, "metrics: unknown metric '" + std::string(item) + "'");
    metrics.push_back(*m);
  }
  if (metrics.empty()) throw Error(ErrorCode::kConfigError, "metrics: list is empty");
  return metrics;
}

std::vector<double> parse_number_list(const std::string& field, const std::string& text) {
  std::vector<double> values;
  for (std::string_view item : split_csv_line(text)) {
    item = trim(item);
    if (item.empty()) continue;
    const auto v = parse_double(item);
    if (!v) throw Error(ErrorCode::kConfigError, field + ": '" + std::string(item) + "' is not a number");
    values.push_back(*v);
  }
  return values;
}

std::string frame_stem(std::size_t frame) {
  std::string s = std::to_string(frame);
  return std::string(s.size() < 5 ? 5 - s.size() : 0, '0') + s;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred_dir;
  std::string manifest;
  std::string metrics = "AUC-J,SIM,s-AUC,CC,NSS";
  std::size_t splits = kDefaultShuffledAucSplits;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  EvaluationOptions options;
  options.metrics = parse_metric_list(a.metrics);
  options.s_auc_splits = a.splits;
  options.seed = a.seed;
  const DatasetManifest manifest = load_manifest(a.manifest);
  const EvaluationRun run = evaluate_prediction_dir(a.pred_dir, manifest, options);
  if (!a.out.empty()) {
    write_file_bytes(fs::path(a.out) / "metrics.csv", metric_report_csv(run.report, run.frames));
  }
  out << format_metric_summary(run.report);
  if (run.frames_without_fixations > 0) {
    out << "frames without fixations (not scored): " << run.frames_without_fixations << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- gate-experiment

struct GateArgs {
  std::string manifest;
  std::size_t clips = 40;
  std::size_t frames = 50;
  double consistent = 0.5;
  std::string mix;
  std::string scheme = "concat";
  bool residual = false;
  double gain = 1.0;
  double fusion_weight = 0.8;
  double context = 1.0;
  double train_fraction = 0.7;
  double threshold = kDefaultGateThreshold;
  std::size_t epochs = 500;
  double lr = 0.5;
  std::string classifier;
  std::string metrics = "AUC-J,SIM,s-AUC,CC,NSS";
  std::size_t splits = kDefaultShuffledAucSplits;
  std::string sweep = "0.6,0.8,0.95";
  std::uint64_t seed = 0;
  std::string out;
  bool write_maps = false;
};

int cmd_gate_experiment(const GateArgs& a, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  cfg.scheme = parse_fusion_scheme(a.scheme);
  cfg.residual = a.residual;
  cfg.audio_gain = a.gain;
  cfg.fusion_weight = a.fusion_weight;
  cfg.context_seconds = a.context;
  cfg.train_fraction = a.train_fraction;
  cfg.gate_threshold = a.threshold;
  cfg.train.epochs = a.epochs;
  cfg.train.learning_rate = a.lr;
  cfg.evaluation.metrics = parse_metric_list(a.metrics);
  cfg.evaluation.s_auc_splits = a.splits;
  cfg.evaluation.seed = a.seed;
  cfg.seed = a.seed;
  if (!a.classifier.empty()) cfg.classifier = read_classifier_csv(a.classifier);
  validate_config(cfg);
  const std::vector<double> sweep = parse_number_list("sweep", a.sweep);

  std::vector<ClipData> clips;
  if (!a.manifest.empty()) {
    const DatasetManifest manifest = load_manifest(a.manifest);
    const ValidationReport report = validate_manifest(manifest);
    if (!report.ok()) {
      err << format_validation_report(report);
      return kExitInput;
    }
    ClipOptions options;
    options.blur.pixels_per_degree = manifest.pixels_per_degree;
    clips = load_clips(manifest, options);
  } else {
    if (a.clips < 2) throw Error(ErrorCode::kConfigError, "clips: need at least 2");
    SyntheticDatasetSpec spec;
    spec.n_clips = a.clips;
    spec.n_frames = a.frames;
    spec.mix = a.mix.empty() ? consistency_mix(a.consistent) : parse_scenario_mix(a.mix);
    spec.seed = a.seed;
    ClipOptions options;
    options.blur.pixels_per_degree = spec.options.pixels_per_degree;
    const std::vector<SyntheticClip> synthetic = synthesize_dataset(spec);
    for (std::size_t i = 0; i < synthetic.size(); ++i) {
      std::string id = std::to_string(i);
      clips.push_back(clip_from_synthetic(
          synthetic[i], "clip_" + std::string(id.size() < 3 ? 3 - id.size() : 0, '0') + id, options));
    }
  }

  const ExperimentResult result = run_gate_experiment(clips, cfg);
  const std::vector<SweepPoint> points =
      sweep.empty() ? std::vector<SweepPoint>{} : sweep_gate_accuracy(result, clips, sweep, cfg);

  out << "scheme: " << fusion_scheme_name(cfg.scheme) << (cfg.residual ? " (residual)" : "") << "\n";
  out << format_ablation_table(result.table);
  if (!points.empty()) {
    out << "\ngated output vs simulated classifier accuracy\n" << format_sweep_table(points);
  }

  if (!a.out.empty()) {
    const fs::path dir(a.out);
    write_ablation_csv(dir / "ablation.csv", result.table);
    write_file_bytes(dir / "ablation.txt", format_ablation_table(result.table));
    write_classifier_csv(dir / "classifier.csv", result.classifier);
    if (!result.training_log.empty()) write_training_log_csv(dir / "training_log.csv", result.training_log);
    if (!points.empty()) write_sweep_csv(dir / "sweep.csv", points);
    std::string track = "video,frame,predicted_lc,ideal_lc\n";
    for (std::size_t i = 0; i < result.predicted.size(); ++i) {
      track += result.frame_video[i] + "," + std::to_string(result.frame_index[i]) + "," +
               std::to_string(result.predicted[i].lc()) + "," + std::to_string(result.ideal[i].lc()) + "\n";
    }
    write_file_bytes(dir / "gate_decisions.csv", track);
    if (a.write_maps) {
      for (GateMode m : kAllGateModes) {
        const auto& stream = result.streams[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < stream.size(); ++i) {
          const fs::path p = dir / "maps" / std::string(gate_mode_name(m)) / result.frame_video[i] /
                             (frame_stem(result.frame_index[i]) + ".fmat");
          write_float_matrix(p, stream[i].grid());
        }
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------- mel

struct MelArgs {
  std::string wav;
  std::string out;
  MelOptions options;
  bool no_log = false;
  std::string window_kind = "hann";
};

int cmd_mel(MelArgs a, std::ostream& out) {
  if (a.window_kind == "hann") {
    a.options.window_kind = WindowKind::kHann;
  } else if (a.window_kind == "rect") {
    a.options.window_kind = WindowKind::kRectangular;
  } else {
    throw Error(ErrorCode::kConfigError, "window-kind: expected hann or rect");
  }
  a.options.log_compress = !a.no_log;
  const AudioClip clip = read_wav(a.wav);
  const MelSpectrogram mel = compute_mel(clip, a.options);
  write_float_matrix(a.out, mel.to_grid());
  const MelOptions& o = a.options;
  out << "frames: " << mel.frames << "\n"
      << "bands: " << mel.n_mels << "\n"
      << "duration_s: " << format_fixed(static_cast<double>(clip.samples.size()) / clip.sample_rate, 3) << "\n"
      << "source_sample_rate: " << format_double(clip.sample_rate) << "\n"
      << "sample_rate: " << format_double(o.sample_rate) << "\n"
      << "window: " << o.window << " (" << a.window_kind << ")\n"
      << "hop: " << o.hop << "\n"
      << "f_min: " << format_double(o.f_min) << "\n"
      << "f_max: " << format_double(o.f_max) << "\n"
      << "log: " << (o.log_compress ? "on" : "off") << "\n"
      << "log_floor: " << format_double(o.log_floor) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string out;
  std::size_t clips = 40;
  std::size_t frames = 50;
  std::string mix;
  double consistent = 0.5;
  std::uint64_t seed = 0;
  std::size_t width = 32;
  std::size_t height = 32;
  std::string name = "synthetic";
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SyntheticDatasetSpec spec;
  spec.n_clips = a.clips;
  spec.n_frames = a.frames;
  spec.mix = a.mix.empty() ? consistency_mix(a.consistent) : parse_scenario_mix(a.mix);
  spec.seed = a.seed;
  spec.name = a.name;
  spec.options.width = a.width;
  spec.options.height = a.height;
  if (spec.n_clips == 0) throw Error(ErrorCode::kConfigError, "clips: must be at least 1");
  const DatasetManifest manifest = write_synthetic_dataset(a.out, spec);
  const std::vector<Scenario> scenarios = allocate_scenarios(spec.mix, spec.n_clips, spec.seed);
  std::array<std::size_t, kScenarioCount> counts{};
  for (Scenario s : scenarios) ++counts[static_cast<std::size_t>(s)];
  out << "wrote " << manifest.videos.size() << " clips, " << manifest.declared_frame_count
      << " frames to " << (fs::path(a.out) / kManifestFileName).string() << "\n";
  for (std::size_t s = 0; s < kScenarioCount; ++s) {
    out << "  " << scenario_name(static_cast<Scenario>(s)) << ": " << counts[s] << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- validate

struct ValidateArgs {
  std::string manifest;
  bool reference = false;
  bool no_media = false;
};

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  const std::vector<DatasetManifest> sets = load_manifest_set(a.manifest);
  ValidationOptions options;
  options.check_media = !a.no_media;
  options.reference_by_name = a.reference;
  bool ok = true;
  for (const DatasetManifest& m : sets) {
    const ValidationReport report = validate_manifest(m, options);
    out << format_validation_report(report);
    ok = ok && report.ok();
  }
  return ok ? kExitOk : kExitInput;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Audio-visual consistency gating toolkit"};
  app.name("avcgate");
  app.require_subcommand(1);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted saliency maps against a manifest");
  eval_cmd->add_option("--pred", eval.pred_dir, "Prediction directory (<video>/<frame:05>.pgm|fmat)")->required();
  eval_cmd->add_option("--manifest", eval.manifest, "Ground-truth manifest")->required();
  eval_cmd->add_option("--metrics", eval.metrics, "Comma-separated metric list")->capture_default_str();
  eval_cmd->add_option("--splits", eval.splits, "Shuffled-AUC splits")->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Shuffled-AUC seed")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Directory for metrics.csv");

  GateArgs gate;
  auto* gate_cmd = app.add_subcommand("gate-experiment", "Run the four-way gating ablation");
  gate_cmd->add_option("--manifest", gate.manifest, "Dataset manifest (synthetic set when omitted)");
  gate_cmd->add_option("--clips", gate.clips, "Synthetic clips")->capture_default_str();
  gate_cmd->add_option("--frames", gate.frames, "Frames per synthetic clip")->capture_default_str();
  gate_cmd->add_option("--consistent", gate.consistent, "Share of consistent synthetic clips")->capture_default_str();
  gate_cmd->add_option("--mix", gate.mix, "Scenario mix, e.g. on_screen_sounding=0.5,silent=0.5");
  gate_cmd->add_option("--scheme", gate.scheme, "concat | spatial_align | bilinear")->capture_default_str();
  gate_cmd->add_flag("--residual", gate.residual, "Add the visual features back after fusion");
  gate_cmd->add_option("--gain", gate.gain, "Audio feature gain")->capture_default_str();
  gate_cmd->add_option("--fusion-weight", gate.fusion_weight, "Audio-guided share of the fused map")->capture_default_str();
  gate_cmd->add_option("--context", gate.context, "Context length in seconds")->capture_default_str();
  gate_cmd->add_option("--train-fraction", gate.train_fraction, "Share of clips used for training")->capture_default_str();
  gate_cmd->add_option("--threshold", gate.threshold, "Gate threshold on the classifier score")->capture_default_str();
  gate_cmd->add_option("--epochs", gate.epochs, "Classifier training epochs")->capture_default_str();
  gate_cmd->add_option("--lr", gate.lr, "Classifier learning rate")->capture_default_str();
  gate_cmd->add_option("--classifier", gate.classifier, "Pre-trained classifier CSV (skips training)");
  gate_cmd->add_option("--metrics", gate.metrics, "Comma-separated metric list")->capture_default_str();
  gate_cmd->add_option("--splits", gate.splits, "Shuffled-AUC splits")->capture_default_str();
  gate_cmd->add_option("--sweep", gate.sweep, "Simulated classifier accuracies (empty to skip)")->capture_default_str();
  gate_cmd->add_option("--seed", gate.seed, "Seed for data, split, training and scoring")->capture_default_str();
  gate_cmd->add_option("--out", gate.out, "Output directory");
  gate_cmd->add_flag("--write-maps", gate.write_maps, "Also write every stream's maps under <out>/maps");

  MelArgs mel;
  auto* mel_cmd = app.add_subcommand("mel", "Compute a log-mel spectrogram from a WAV file");
  mel_cmd->add_option("--wav", mel.wav, "Input PCM WAV")->required();
  mel_cmd->add_option("--out", mel.out, "Output float matrix (frames x bands)")->required();
  mel_cmd->add_option("--sample-rate", mel.options.sample_rate, "Analysis sample rate")->capture_default_str();
  mel_cmd->add_option("--window", mel.options.window, "STFT window (power of two)")->capture_default_str();
  mel_cmd->add_option("--hop", mel.options.hop, "STFT hop")->capture_default_str();
  mel_cmd->add_option("--mels", mel.options.n_mels, "Mel bands")->capture_default_str();
  mel_cmd->add_option("--fmin", mel.options.f_min, "Lowest band edge in Hz")->capture_default_str();
  mel_cmd->add_option("--fmax", mel.options.f_max, "Highest band edge in Hz")->capture_default_str();
  mel_cmd->add_option("--log-floor", mel.options.log_floor, "Energy floor before the log")->capture_default_str();
  mel_cmd->add_flag("--no-log", mel.no_log, "Keep linear band energies");
  mel_cmd->add_option("--window-kind", mel.window_kind, "hann | rect")->capture_default_str();

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic audio-visual dataset");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--clips", synth.clips, "Number of clips")->capture_default_str();
  synth_cmd->add_option("--frames", synth.frames, "Frames per clip")->capture_default_str();
  synth_cmd->add_option("--mix", synth.mix, "Scenario mix, e.g. on_screen_sounding=0.5,background_music=0.5");
  synth_cmd->add_option("--consistent", synth.consistent, "Share of consistent clips when --mix is absent")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--width", synth.width, "Frame width")->capture_default_str();
  synth_cmd->add_option("--height", synth.height, "Frame height")->capture_default_str();
  synth_cmd->add_option("--name", synth.name, "Dataset name")->capture_default_str();

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "Check a manifest and its media");
  validate_cmd->add_option("--manifest", validate.manifest, "Manifest file")->required();
  validate_cmd->add_flag("--reference", validate.reference, "Compare counts with the published set of the same name");
  validate_cmd->add_flag("--no-media", validate.no_media, "Skip opening media and label files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval, out);
    if (*gate_cmd) return cmd_gate_experiment(gate, out, err);
    if (*mel_cmd) return cmd_mel(mel, out);
    if (*synth_cmd) return cmd_synth(synth, out);
    if (*validate_cmd) return cmd_validate(validate, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace avcgate::cli
