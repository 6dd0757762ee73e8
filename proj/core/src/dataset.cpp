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

#include "avcgate/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <sstream>

#include "avcgate/error.hpp"
#include "avcgate/map_io.hpp"
#include "avcgate/text.hpp"

namespace avcgate {

std::size_t DatasetManifest::summed_frame_count() const noexcept {
  std::size_t total = 0;
  for (const VideoEntry& v : videos) total += v.frame_count;
  return total;
}

namespace {

class ManifestParser {
 public:
  ManifestParser(std::string_view text, std::filesystem::path base_dir, std::string_view source)
      : text_(text), base_dir_(std::move(base_dir)), source_(source) {}

  std::vector<DatasetManifest> parse() {
    std::istringstream in{std::string(text_)};
    std::string raw;
    bool header_seen = false;
    while (std::getline(in, raw)) {
      ++line_no_;
      const std::string_view line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      const auto space = line.find_first_of(" \t");
      const std::string_view key = line.substr(0, space);
      const std::string_view value =
          space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));

      if (!header_seen) {
        if (key != kManifestMagic) fail("expected '" + std::string(kManifestMagic) + " 1' header");
        const auto version = parse_integer(value);
        if (!version || *version != kManifestVersion) fail("unsupported manifest version");
        header_seen = true;
        continue;
      }
      if (in_video_) {
        video_field(key, value);
      } else {
        dataset_field(key, value);
      }
    }
    if (!header_seen) fail("empty manifest");
    if (in_video_) fail("video '" + video_.id + "' is missing 'end'");
    finish_dataset();
    if (out_.empty()) fail("no dataset block");
    return std::move(out_);
  }

 private:
  [[noreturn]] void fail(const std::string& what, ErrorCode code = ErrorCode::kParseError) const {
    throw Error(code, std::string(source_) + ":" + std::to_string(line_no_) + ": " + what);
  }

  std::size_t count(std::string_view key, std::string_view value) const {
    const auto v = parse_integer(value);
    if (!v) fail(std::string(key) + ": expected an integer, got '" + std::string(value) + "'");
    if (*v < 0) fail(std::string(key) + ": must not be negative");
    return static_cast<std::size_t>(*v);
  }

  double real(std::string_view key, std::string_view value) const {
    const auto v = parse_double(value);
    if (!v || !std::isfinite(*v)) {
      fail(std::string(key) + ": expected a number, got '" + std::string(value) + "'");
    }
    return *v;
  }

  void dataset_field(std::string_view key, std::string_view value) {
    if (key == "dataset") {
      finish_dataset();
      if (value.empty()) fail("dataset: missing name");
      current_ = DatasetManifest{};
      current_->name = std::string(value);
      current_->base_dir = base_dir_;
      have_videos_decl_ = have_frames_decl_ = false;
      return;
    }
    if (!current_) fail("'" + std::string(key) + "' before any 'dataset' line");
    if (key == "declared_videos") {
      current_->declared_video_count = count(key, value);
      have_videos_decl_ = true;
    } else if (key == "declared_frames") {
      current_->declared_frame_count = count(key, value);
      have_frames_decl_ = true;
    } else if (key == "year") {
      const auto v = parse_integer(value);
      if (!v) fail("year: expected an integer");
      current_->year = static_cast<int>(*v);
    } else if (key == "viewers") {
      current_->viewers = count(key, value);
    } else if (key == "pixels_per_degree") {
      current_->pixels_per_degree = real(key, value);
      if (!(current_->pixels_per_degree > 0.0)) fail("pixels_per_degree: must be > 0");
    } else if (key == "video") {
      if (value.empty() || split_whitespace(value).size() != 1) fail("video: expected one id");
      video_ = VideoEntry{};
      video_.id = std::string(value);
      have_frames_ = have_fps_ = have_size_ = false;
      in_video_ = true;
    } else {
      fail("unknown dataset field '" + std::string(key) + "'");
    }
  }

  void video_field(std::string_view key, std::string_view value) {
    if (key == "end") {
      if (!have_frames_) fail("video '" + video_.id + "': frames", ErrorCode::kMissingField);
      if (!have_fps_) fail("video '" + video_.id + "': fps", ErrorCode::kMissingField);
      if (!have_size_) fail("video '" + video_.id + "': size", ErrorCode::kMissingField);
      current_->videos.push_back(std::move(video_));
      in_video_ = false;
    } else if (key == "frames") {
      video_.frame_count = count(key, value);
      if (video_.frame_count == 0) fail("frames: must be >= 1");
      have_frames_ = true;
    } else if (key == "fps") {
      video_.fps = real(key, value);
      if (!(video_.fps > 0.0)) fail("fps: must be > 0");
      have_fps_ = true;
    } else if (key == "size") {
      const auto parts = split_whitespace(value);
      if (parts.size() != 2) fail("size: expected '<width> <height>'");
      video_.frame_size = {count("width", parts[0]), count("height", parts[1])};
      if (video_.frame_size.area() == 0) fail("size: dimensions must be >= 1");
      have_size_ = true;
    } else if (key == "frame_pattern") {
      video_.frame_pattern = std::string(value);
    } else if (key == "audio") {
      video_.audio = std::string(value);
    } else if (key == "fixations") {
      video_.fixations = std::string(value);
    } else if (key == "avc") {
      video_.avc = std::string(value);
    } else {
      fail("unknown video field '" + std::string(key) + "'");
    }
  }

  void finish_dataset() {
    if (!current_) return;
    if (!have_videos_decl_) fail("dataset '" + current_->name + "': declared_videos", ErrorCode::kMissingField);
    if (!have_frames_decl_) fail("dataset '" + current_->name + "': declared_frames", ErrorCode::kMissingField);
    out_.push_back(std::move(*current_));
    current_.reset();
  }

  std::string_view text_;
  std::filesystem::path base_dir_;
  std::string_view source_;
  std::size_t line_no_ = 0;

  std::vector<DatasetManifest> out_;
  std::optional<DatasetManifest> current_;
  bool have_videos_decl_ = false;
  bool have_frames_decl_ = false;
  VideoEntry video_;
  bool in_video_ = false;
  bool have_frames_ = false;
  bool have_fps_ = false;
  bool have_size_ = false;
};

}  // namespace

std::vector<DatasetManifest> parse_manifest_set(std::string_view text,
                                                const std::filesystem::path& base_dir,
                                                std::string_view source_name) {
  return ManifestParser(text, base_dir, source_name).parse();
}

std::vector<DatasetManifest> load_manifest_set(const std::filesystem::path& path) {
  const std::string text = read_file_bytes(path);
  const std::string source = path.string();
  return parse_manifest_set(text, path.parent_path(), source);
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  auto set = load_manifest_set(path);
  if (set.size() != 1) {
    throw Error(ErrorCode::kParseError, path.string() + ": expected one dataset block, found " +
                                            std::to_string(set.size()));
  }
  return std::move(set.front());
}

std::string serialize_manifest_set(std::span<const DatasetManifest> manifests) {
  std::string out = std::string(kManifestMagic) + " " + std::to_string(kManifestVersion) + "\n";
  for (std::size_t d = 0; d < manifests.size(); ++d) {
    const DatasetManifest& m = manifests[d];
    if (d > 0) out += "\n";
    out += "dataset " + m.name + "\n";
    out += "declared_videos " + std::to_string(m.declared_video_count) + "\n";
    out += "declared_frames " + std::to_string(m.declared_frame_count) + "\n";
    if (m.year) out += "year " + std::to_string(*m.year) + "\n";
    if (m.viewers) out += "viewers " + std::to_string(*m.viewers) + "\n";
    out += "pixels_per_degree " + format_double(m.pixels_per_degree) + "\n";
    for (const VideoEntry& v : m.videos) {
      out += "video " + v.id + "\n";
      out += "  frames " + std::to_string(v.frame_count) + "\n";
      out += "  fps " + format_double(v.fps) + "\n";
      out += "  size " + std::to_string(v.frame_size.width) + " " +
             std::to_string(v.frame_size.height) + "\n";
      if (!v.frame_pattern.empty()) out += "  frame_pattern " + v.frame_pattern + "\n";
      if (!v.audio.empty()) out += "  audio " + v.audio + "\n";
      if (!v.fixations.empty()) out += "  fixations " + v.fixations + "\n";
      if (!v.avc.empty()) out += "  avc " + v.avc + "\n";
      out += "end\n";
    }
  }
  return out;
}

std::string serialize_manifest(const DatasetManifest& manifest) {
  return serialize_manifest_set(std::span<const DatasetManifest>(&manifest, 1));
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  write_file_bytes(path, serialize_manifest(manifest));
}

std::string format_frame_path(std::string_view pattern, std::size_t index) {
  const auto pct = pattern.find('%');
  if (pct == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "frame pattern has no %d field");
  }
  std::size_t pos = pct + 1;
  bool zero_pad = false;
  if (pos < pattern.size() && pattern[pos] == '0') {
    zero_pad = true;
    ++pos;
  }
  std::size_t width = 0;
  while (pos < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[pos]))) {
    width = width * 10 + static_cast<std::size_t>(pattern[pos] - '0');
    ++pos;
  }
  if (pos >= pattern.size() || pattern[pos] != 'd') {
    throw Error(ErrorCode::kInvalidArgument, "frame pattern field must be %d or %0Nd");
  }
  std::string number = std::to_string(index);
  if (number.size() < width) number.insert(0, width - number.size(), zero_pad ? '0' : ' ');
  return std::string(pattern.substr(0, pct)) + number + std::string(pattern.substr(pos + 1));
}

AvcLabelTrack parse_avc_labels(std::string_view text, std::optional<std::size_t> expected_frames,
                               std::string_view source_name) {
  AvcLabelTrack track;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (line_no == 1 && fields[0] == "frame_index") continue;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    if (fields.size() != 2) throw Error(ErrorCode::kParseError, where + ": expected 2 fields");
    const auto frame = parse_unsigned(fields[0]);
    if (!frame) throw Error(ErrorCode::kParseError, where + ": bad frame index");
    const auto label = parse_integer(fields[1]);
    if (!label || (*label != 0 && *label != 1)) {
      throw Error(ErrorCode::kInvalidLabel,
                  where + ": label '" + std::string(fields[1]) + "' is not 0 or 1");
    }
    if (*frame < track.labels.size()) {
      throw Error(ErrorCode::kDuplicateFrame, where + ": frame " + std::to_string(*frame));
    }
    if (*frame > track.labels.size()) {
      throw Error(ErrorCode::kGapInTrack,
                  where + ": frame " + std::to_string(track.labels.size()) + " missing");
    }
    track.labels.push_back(static_cast<int>(*label));
  }
  if (expected_frames && track.labels.size() != *expected_frames) {
    throw Error(ErrorCode::kLengthMismatch,
                std::string(source_name) + ": " + std::to_string(track.labels.size()) +
                    " labels for " + std::to_string(*expected_frames) + " frames");
  }
  return track;
}

AvcLabelTrack load_avc_labels(const std::filesystem::path& path,
                              std::optional<std::size_t> expected_frames) {
  AvcLabelTrack track = parse_avc_labels(read_file_bytes(path), expected_frames, path.string());
  track.video_id = path.stem().string();
  return track;
}

void save_avc_labels(const std::filesystem::path& path, const AvcLabelTrack& track) {
  std::string out = "frame_index,label\n";
  for (std::size_t i = 0; i < track.labels.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(track.labels[i]) + "\n";
  }
  write_file_bytes(path, out);
}

AvcLabelTrack upsample_fragment_labels(std::span<const int> fragment_labels,
                                       double fragment_seconds, double fps,
                                       std::size_t frame_count) {
  if (!(fragment_seconds > 0.0) || !(fps > 0.0) || fragment_labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "need fragments, a positive duration and fps");
  }
  AvcLabelTrack track;
  track.labels.resize(frame_count);
  for (std::size_t i = 0; i < frame_count; ++i) {
    auto fragment = static_cast<std::size_t>(static_cast<double>(i) / fps / fragment_seconds);
    fragment = std::min(fragment, fragment_labels.size() - 1);
    const int label = fragment_labels[fragment];
    if (label != 0 && label != 1) throw Error(ErrorCode::kInvalidLabel, "fragment label not 0/1");
    track.labels[i] = label;
  }
  return track;
}

namespace {

constexpr std::array<ReferenceStats, 6> kReferenceStats = {{
    {"DIEM", 2010, 84, 42, 78167},
    {"AVAD", 2016, 45, 16, 9564},
    {"Coutrot1", 2013, 60, 72, 25223},
    {"Coutrot2", 2014, 15, 40, 17134},
    {"SumMe", 2019, 25, 10, 109788},
    {"ETMD", 2019, 12, 10, 52744},
}};

}  // namespace

std::span<const ReferenceStats> published_reference_stats() noexcept { return kReferenceStats; }

std::optional<ReferenceStats> find_reference_stats(std::string_view name) noexcept {
  for (const ReferenceStats& r : kReferenceStats) {
    if (r.name == name) return r;
  }
  return std::nullopt;
}

std::vector<DatasetManifest> reference_manifest_set() {
  std::vector<DatasetManifest> out;
  for (const ReferenceStats& r : kReferenceStats) {
    DatasetManifest m;
    m.name = std::string(r.name);
    m.declared_video_count = r.videos;
    m.declared_frame_count = r.frames;
    m.year = r.year;
    m.viewers = r.viewers;
    out.push_back(std::move(m));
  }
  return out;
}

std::string_view violation_name(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::kDeclaredVideoCount: return "DeclaredVideoCount";
    case ViolationKind::kDeclaredFrameCount: return "DeclaredFrameCount";
    case ViolationKind::kDuplicateVideoId: return "DuplicateVideoId";
    case ViolationKind::kBadFrameCount: return "BadFrameCount";
    case ViolationKind::kBadFps: return "BadFps";
    case ViolationKind::kBadFrameSize: return "BadFrameSize";
    case ViolationKind::kMissingFile: return "MissingFile";
    case ViolationKind::kLabelLengthMismatch: return "LabelLengthMismatch";
    case ViolationKind::kInvalidLabel: return "InvalidLabel";
    case ViolationKind::kDuplicateFrame: return "DuplicateFrame";
    case ViolationKind::kGapInTrack: return "GapInTrack";
    case ViolationKind::kFixationOutOfBounds: return "FixationOutOfBounds";
    case ViolationKind::kMalformedFile: return "MalformedFile";
    case ViolationKind::kReferenceVideoCount: return "ReferenceVideoCount";
    case ViolationKind::kReferenceFrameCount: return "ReferenceFrameCount";
    case ViolationKind::kUnknownReference: return "UnknownReference";
  }
  return "Unknown";
}

bool ValidationReport::has(ViolationKind kind) const noexcept {
  return std::any_of(violations.begin(), violations.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

namespace {

ViolationKind label_violation(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidLabel: return ViolationKind::kInvalidLabel;
    case ErrorCode::kDuplicateFrame: return ViolationKind::kDuplicateFrame;
    case ErrorCode::kGapInTrack: return ViolationKind::kGapInTrack;
    case ErrorCode::kLengthMismatch: return ViolationKind::kLabelLengthMismatch;
    case ErrorCode::kIoError: return ViolationKind::kMissingFile;
    default: return ViolationKind::kMalformedFile;
  }
}

void check_video_media(const DatasetManifest& m, const VideoEntry& v,
                       std::vector<Violation>& out) {
  const auto missing = [&](const char* what) {
    out.push_back({ViolationKind::kMissingFile, v.id, std::string(what) + " path not set"});
  };
  const auto exists = [&](const std::string& rel) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(m.resolve(rel), ec)) return true;
    out.push_back({ViolationKind::kMissingFile, v.id, m.resolve(rel).string()});
    return false;
  };

  if (v.frame_pattern.empty()) {
    missing("frame_pattern");
  } else {
    try {
      exists(format_frame_path(v.frame_pattern, 0)) &&
          exists(format_frame_path(v.frame_pattern, v.frame_count - 1));
    } catch (const Error& e) {
      out.push_back({ViolationKind::kMalformedFile, v.id, e.what()});
    }
  }

  if (v.audio.empty()) {
    missing("audio");
  } else if (exists(v.audio)) {
    try {
      (void)read_wav(m.resolve(v.audio));
    } catch (const std::exception& e) {
      out.push_back({ViolationKind::kMalformedFile, v.id, e.what()});
    }
  }

  if (v.fixations.empty()) {
    missing("fixations");
  } else if (exists(v.fixations)) {
    try {
      (void)read_fixation_csv(m.resolve(v.fixations), v.frame_size, v.frame_count);
    } catch (const Error& e) {
      out.push_back({e.code() == ErrorCode::kOutOfBounds ? ViolationKind::kFixationOutOfBounds
                                                         : ViolationKind::kMalformedFile,
                     v.id, e.what()});
    } catch (const std::exception& e) {
      out.push_back({ViolationKind::kMalformedFile, v.id, e.what()});
    }
  }

  if (v.avc.empty()) {
    missing("avc");
  } else if (exists(v.avc)) {
    try {
      (void)load_avc_labels(m.resolve(v.avc), v.frame_count);
    } catch (const Error& e) {
      out.push_back({label_violation(e.code()), v.id, e.what()});
    } catch (const std::exception& e) {
      out.push_back({ViolationKind::kMalformedFile, v.id, e.what()});
    }
  }
}

}  // namespace

ValidationReport validate_manifest(const DatasetManifest& manifest,
                                   const ValidationOptions& options) {
  ValidationReport report;
  report.dataset = manifest.name;
  auto& out = report.violations;
  try {
    std::set<std::string> ids;
    for (const VideoEntry& v : manifest.videos) {
      if (!ids.insert(v.id).second) {
        out.push_back({ViolationKind::kDuplicateVideoId, v.id, "video id listed twice"});
      }
      if (v.frame_count == 0) out.push_back({ViolationKind::kBadFrameCount, v.id, "frames must be >= 1"});
      if (!(v.fps > 0.0)) out.push_back({ViolationKind::kBadFps, v.id, "fps must be > 0"});
      if (v.frame_size.area() == 0) {
        out.push_back({ViolationKind::kBadFrameSize, v.id, "frame size must be at least 1x1"});
      }
      if (options.check_media && v.frame_count > 0 && v.frame_size.area() > 0) {
        check_video_media(manifest, v, out);
      }
    }

    if (!manifest.videos.empty()) {
      if (manifest.videos.size() != manifest.declared_video_count) {
        out.push_back({ViolationKind::kDeclaredVideoCount, "",
                       "declared " + std::to_string(manifest.declared_video_count) +
                           " videos, listed " + std::to_string(manifest.videos.size())});
      }
      if (manifest.summed_frame_count() != manifest.declared_frame_count) {
        out.push_back({ViolationKind::kDeclaredFrameCount, "",
                       "declared " + std::to_string(manifest.declared_frame_count) +
                           " frames, listed " + std::to_string(manifest.summed_frame_count())});
      }
    }

    std::optional<ReferenceStats> reference = options.reference;
    if (!reference && options.reference_by_name) {
      reference = find_reference_stats(manifest.name);
      if (!reference) {
        out.push_back({ViolationKind::kUnknownReference, "",
                       "no published statistics for '" + manifest.name + "'"});
      }
    }
    if (reference) {
      if (manifest.declared_video_count != reference->videos) {
        out.push_back({ViolationKind::kReferenceVideoCount, "",
                       std::string(reference->name) + " has " + std::to_string(reference->videos) +
                           " videos, manifest declares " +
                           std::to_string(manifest.declared_video_count)});
      }
      if (manifest.declared_frame_count != reference->frames) {
        out.push_back({ViolationKind::kReferenceFrameCount, "",
                       std::string(reference->name) + " has " + std::to_string(reference->frames) +
                           " frames, manifest declares " +
                           std::to_string(manifest.declared_frame_count)});
      }
    }
  } catch (const std::exception& e) {
    out.push_back({ViolationKind::kMalformedFile, "", e.what()});
  }
  return report;
}

std::string format_validation_report(const ValidationReport& report) {
  std::string out = "dataset " + report.dataset + ": ";
  if (report.ok()) return out + "OK\n";
  out += std::to_string(report.violations.size()) + " violation(s)\n";
  for (const Violation& v : report.violations) {
    out += "  " + std::string(violation_name(v.kind));
    if (!v.video.empty()) out += " [" + v.video + "]";
    out += ": " + v.detail + "\n";
  }
  return out;
}

InstanceStream::InstanceStream(DatasetManifest manifest, InstanceOptions options)
    : manifest_(std::move(manifest)), options_(std::move(options)) {
  options_.blur.pixels_per_degree = manifest_.pixels_per_degree;
}

void InstanceStream::load_video(std::size_t video) {
  const VideoEntry& v = manifest_.videos[video];
  VideoMedia media;
  const AudioClip clip = read_wav(manifest_.resolve(v.audio));
  const MelSpectrogram mel = compute_mel(clip, options_.mel);
  media.slices = frame_align(mel, v.fps, options_.mel.hop, options_.mel.sample_rate,
                             v.frame_count, options_.align);
  media.fixations = read_fixation_csv(manifest_.resolve(v.fixations), v.frame_size, v.frame_count);
  media.labels = load_avc_labels(manifest_.resolve(v.avc), v.frame_count);
  media.labels.video_id = v.id;
  media_ = std::move(media);
}

std::optional<Instance> InstanceStream::next() {
  while (video_ < manifest_.videos.size() && frame_ >= manifest_.videos[video_].frame_count) {
    ++video_;
    frame_ = 0;
    media_.reset();
  }
  if (video_ >= manifest_.videos.size()) return std::nullopt;

  const VideoEntry& v = manifest_.videos[video_];
  try {
    if (!media_) load_video(video_);
    Instance inst;
    inst.video_id = v.id;
    inst.frame_index = frame_;
    inst.audio = media_->slices[frame_];
    inst.fixations = media_->fixations[frame_];
    if (!inst.fixations.empty()) inst.density = density_from_fixations(inst.fixations, options_.blur);
    inst.avc_label = media_->labels.labels[frame_];
    if (options_.load_frames) {
      inst.frame = read_pnm(manifest_.resolve(format_frame_path(v.frame_pattern, frame_)));
      if (inst.frame.size() != v.frame_size) {
        throw Error(ErrorCode::kShapeMismatch, "frame image size differs from manifest size");
      }
    }
    ++frame_;
    return inst;
  } catch (const Error& e) {
    throw Error(e.code(), "video " + v.id + " frame " + std::to_string(frame_) + ": " + e.detail());
  }
}

InstanceStream iterate_instances(const DatasetManifest& manifest, const InstanceOptions& options) {
  return InstanceStream(manifest, options);
}

}  // namespace avcgate
