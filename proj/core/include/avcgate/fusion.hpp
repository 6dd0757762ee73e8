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

// Audio-visual fusion schemes and the binary consistency gate.
//
// The gate turns an always-fusing bi-stream model into a consistency-aware
// one: per frame, output = lc * Fuse(AV, V) + (1 - lc) * V with lc in {0, 1},
// so the output is always exactly one of the two streams.

#ifndef AVCGATE_FUSION_HPP_
#define AVCGATE_FUSION_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "avcgate/grid.hpp"

namespace avcgate {

// channels x height x width, channel-major.
class FeatureTensor {
 public:
  FeatureTensor() = default;
  FeatureTensor(std::size_t channels, std::size_t height, std::size_t width, double fill = 0.0);
  FeatureTensor(std::size_t channels, std::size_t height, std::size_t width,
                std::vector<double> values);

  std::size_t channels() const noexcept { return channels_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t plane_size() const noexcept { return height_ * width_; }

  double& at(std::size_t c, std::size_t h, std::size_t w) {
    return values_[(c * height_ + h) * width_ + w];
  }
  double at(std::size_t c, std::size_t h, std::size_t w) const {
    return values_[(c * height_ + h) * width_ + w];
  }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> plane(std::size_t c) const {
    return std::span<const double>(values_).subspan(c * plane_size(), plane_size());
  }

  bool same_shape(const FeatureTensor& o) const noexcept {
    return channels_ == o.channels_ && height_ == o.height_ && width_ == o.width_;
  }
  bool operator==(const FeatureTensor&) const = default;

 private:
  std::size_t channels_ = 0;
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> values_;
};

class FeatureVector {
 public:
  FeatureVector() = default;
  explicit FeatureVector(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const FeatureVector&) const = default;

 private:
  std::vector<double> values_;
};

// rows = audio length, cols = visual length.
class BilinearTransform {
 public:
  BilinearTransform(std::size_t rows, std::size_t cols, std::vector<double> values);
  static BilinearTransform identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

enum class GateSource : std::uint8_t { kPredicted, kLabel };

std::string_view gate_source_name(GateSource s) noexcept;

class GateDecision {
 public:
  // Throws InvalidLabel unless lc is 0 or 1.
  GateDecision(int lc, GateSource source);

  int lc() const noexcept { return lc_; }
  bool fuse() const noexcept { return lc_ == 1; }
  GateSource source() const noexcept { return source_; }

  bool operator==(const GateDecision&) const = default;

 private:
  int lc_;
  GateSource source_;
};

inline constexpr double kDefaultGateThreshold = 0.5;

// lc = 1 iff score >= threshold.
GateDecision binarize_score(double score, double threshold = kDefaultGateThreshold);

// Returns a copy of fused_av when lc = 1 and of v_only when lc = 0.
// Throws ShapeMismatch if the two maps differ in size.
SaliencyMap gate_output(const GateDecision& decision, const SaliencyMap& fused_av,
                        const SaliencyMap& v_only);

// Tiles `a` over v's spatial grid and stacks it after v's channels.
// Throws ChannelMismatch unless a.size() == v.channels().
FeatureTensor fuse_concat(const FeatureTensor& v, const FeatureVector& a);

// Inverse of fuse_concat. Throws ChannelMismatch for an odd channel count
// and InvalidArgument when the audio half is not spatially constant.
std::pair<FeatureTensor, FeatureVector> split_concat(const FeatureTensor& fused);

// Audio tiled over every spatial position and multiplied into v channel by
// channel; with `residual`, v is added back: v + v * tile(a).
FeatureTensor fuse_spatial_align(const FeatureTensor& v, const FeatureVector& a, bool residual);

// out_j = sum_i a_i * M_ij * v_j. Audio and visual lengths may differ; M
// bridges them. Throws ShapeMismatch on M.rows != |a| or M.cols != |v|.
FeatureVector fuse_bilinear(const FeatureVector& v_flat, const FeatureVector& a,
                            const BilinearTransform& m);

struct GatedFrame {
  FeatureTensor visual;
  FeatureVector audio;
  GateDecision decision{0, GateSource::kLabel};
};

// Produces a saliency map for one frame. `audio` is null for the
// visual-only branch. Must be deterministic.
using SaliencyDecoder = std::function<SaliencyMap(
    std::size_t frame_index, const FeatureTensor& visual, const FeatureVector* audio)>;

struct GatedStreams {
  std::vector<SaliencyMap> v_only;
  std::vector<SaliencyMap> always_fuse;
  std::vector<SaliencyMap> gated;
};

// Runs both branches per frame and gates them. Decoder failures are
// rethrown as DecoderError (or their own code) prefixed with the frame index.
GatedStreams run_gated_pipeline(std::span<const GatedFrame> frames,
                                const SaliencyDecoder& decoder);

// CSV `frame_index,lc,source` with a header line; frames must be dense.
std::vector<GateDecision> read_gate_track(const std::filesystem::path& path);
void write_gate_track(const std::filesystem::path& path, std::span<const GateDecision> track);

}  // namespace avcgate

#endif  // AVCGATE_FUSION_HPP_
