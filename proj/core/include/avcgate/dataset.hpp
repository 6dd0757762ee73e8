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

// Dataset manifests, consistency-label tracks, validation and the
// per-frame instance stream {audio, frame, saliency GT, consistency label}.
//
// Manifest grammar (line oriented, `#` starts a comment line):
//
//   avsd-manifest 1
//   dataset <name>
//   declared_videos <count>
//   declared_frames <count>
//   [year <int>]
//   [viewers <count>]
//   [pixels_per_degree <real>]
//   video <id>
//     frames <count>
//     fps <real>
//     size <width> <height>
//     [frame_pattern <relative path with one %d or %0Nd>]
//     [audio <relative path to 16-bit PCM WAV>]
//     [fixations <relative path to frame_index,x,y CSV>]
//     [avc <relative path to frame_index,label CSV>]
//   end
//
// Several `dataset` blocks may follow one header. Paths resolve against
// the manifest's directory. Media is never opened while loading.

#ifndef AVCGATE_DATASET_HPP_
#define AVCGATE_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "avcgate/audio.hpp"
#include "avcgate/grid.hpp"

namespace avcgate {

inline constexpr std::string_view kManifestMagic = "avsd-manifest";
inline constexpr int kManifestVersion = 1;

struct VideoEntry {
  std::string id;
  std::size_t frame_count = 0;
  double fps = 0.0;
  FrameSize frame_size;
  std::string frame_pattern;
  std::string audio;
  std::string fixations;
  std::string avc;

  bool operator==(const VideoEntry&) const = default;
};

struct DatasetManifest {
  std::string name;
  std::size_t declared_video_count = 0;
  std::size_t declared_frame_count = 0;
  std::optional<int> year;
  std::optional<std::size_t> viewers;  // metadata only
  double pixels_per_degree = 30.0;
  std::vector<VideoEntry> videos;
  // Directory the relative paths resolve against; not serialized.
  std::filesystem::path base_dir;

  std::size_t summed_frame_count() const noexcept;
  std::filesystem::path resolve(const std::string& relative) const { return base_dir / relative; }

  bool operator==(const DatasetManifest& o) const {
    return name == o.name && declared_video_count == o.declared_video_count &&
           declared_frame_count == o.declared_frame_count && year == o.year &&
           viewers == o.viewers && pixels_per_degree == o.pixels_per_degree &&
           videos == o.videos;
  }
};

// ParseError / MissingField carry "<file>:<line>: <field>" diagnostics.
std::vector<DatasetManifest> parse_manifest_set(std::string_view text,
                                                const std::filesystem::path& base_dir = {},
                                                std::string_view source_name = "<manifest>");
std::vector<DatasetManifest> load_manifest_set(const std::filesystem::path& path);
// Exactly one dataset block expected.
DatasetManifest load_manifest(const std::filesystem::path& path);

std::string serialize_manifest_set(std::span<const DatasetManifest> manifests);
std::string serialize_manifest(const DatasetManifest& manifest);
void save_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

// Expands the single %d / %0Nd field of `pattern` with `index`.
std::string format_frame_path(std::string_view pattern, std::size_t index);

struct AvcLabelTrack {
  std::string video_id;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  bool operator==(const AvcLabelTrack&) const = default;
};

// CSV `frame_index,label` with optional header. Throws DuplicateFrame,
// GapInTrack, InvalidLabel, and LengthMismatch when `expected_frames` is
// given and the dense track has a different length.
AvcLabelTrack parse_avc_labels(std::string_view text, std::optional<std::size_t> expected_frames = {},
                               std::string_view source_name = "<labels>");
AvcLabelTrack load_avc_labels(const std::filesystem::path& path,
                              std::optional<std::size_t> expected_frames = {});
void save_avc_labels(const std::filesystem::path& path, const AvcLabelTrack& track);

// Fragment-level labels (e.g. one per second) repeated to frame rate.
AvcLabelTrack upsample_fragment_labels(std::span<const int> fragment_labels,
                                       double fragment_seconds, double fps,
                                       std::size_t frame_count);

// Published statistics of the public audio-visual eye-tracking sets.
struct ReferenceStats {
  std::string_view name;
  int year;
  std::size_t videos;
  std::size_t viewers;
  std::size_t frames;
};

std::span<const ReferenceStats> published_reference_stats() noexcept;
std::optional<ReferenceStats> find_reference_stats(std::string_view name) noexcept;

// Summary-only manifest (no video entries) holding every published set.
std::vector<DatasetManifest> reference_manifest_set();

enum class ViolationKind {
  kDeclaredVideoCount,
  kDeclaredFrameCount,
  kDuplicateVideoId,
  kBadFrameCount,
  kBadFps,
  kBadFrameSize,
  kMissingFile,
  kLabelLengthMismatch,
  kInvalidLabel,
  kDuplicateFrame,
  kGapInTrack,
  kFixationOutOfBounds,
  kMalformedFile,
  kReferenceVideoCount,
  kReferenceFrameCount,
  kUnknownReference,
};

std::string_view violation_name(ViolationKind kind) noexcept;

struct Violation {
  ViolationKind kind;
  std::string video;  // empty for dataset-level findings
  std::string detail;
};

struct ValidationReport {
  std::string dataset;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(ViolationKind kind) const noexcept;
};

struct ValidationOptions {
  // Open label, fixation, audio and frame files and check their contents.
  bool check_media = true;
  // Compare declared counts against this reference when set.
  std::optional<ReferenceStats> reference;
  // Look the reference up by dataset name; unknown names are a violation.
  bool reference_by_name = false;
};

// Never throws; every problem is reported. Declared-versus-listed counts are
// only compared when the manifest lists at least one video.
ValidationReport validate_manifest(const DatasetManifest& manifest,
                                   const ValidationOptions& options = {});

std::string format_validation_report(const ValidationReport& report);

struct InstanceOptions {
  MelOptions mel;
  FrameAlignOptions align;
  BlurOptions blur;  // pixels_per_degree overridden by the manifest
  bool load_frames = true;
};

// One {A_i, V_i, Ls_i, Lc_i} tuple.
struct Instance {
  std::string video_id;
  std::size_t frame_index = 0;
  MelSlice audio;
  Grid frame;  // empty when frames are not loaded
  FixationSet fixations;
  std::optional<FixationDensity> density;  // absent for frames without fixations
  int avc_label = 0;
};

// Forward-only stream over every frame of every video, in manifest order.
// Media for a video is loaded when the stream reaches it; failures are
// rethrown with the (video, frame) coordinates.
class InstanceStream {
 public:
  InstanceStream(DatasetManifest manifest, InstanceOptions options = {});

  std::optional<Instance> next();

 private:
  struct VideoMedia {
    std::vector<MelSlice> slices;
    std::vector<FixationSet> fixations;
    AvcLabelTrack labels;
  };
  void load_video(std::size_t video);

  DatasetManifest manifest_;
  InstanceOptions options_;
  std::size_t video_ = 0;
  std::size_t frame_ = 0;
  std::optional<VideoMedia> media_;
};

InstanceStream iterate_instances(const DatasetManifest& manifest,
                                 const InstanceOptions& options = {});

}  // namespace avcgate

#endif  // AVCGATE_DATASET_HPP_
