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

#include "avcgate/fusion.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "avcgate/error.hpp"
#include "avcgate/map_io.hpp"
#include "avcgate/text.hpp"

namespace avcgate {
namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " has non-finite values");
  }
}

void require_channels(const FeatureTensor& v, const FeatureVector& a) {
  if (a.size() != v.channels()) {
    throw Error(ErrorCode::kChannelMismatch, "audio length " + std::to_string(a.size()) +
                                                 " vs " + std::to_string(v.channels()) +
                                                 " visual channels");
  }
}

}  // namespace

FeatureTensor::FeatureTensor(std::size_t channels, std::size_t height, std::size_t width,
                             double fill)
    : FeatureTensor(channels, height, width,
                    std::vector<double>(channels * height * width, fill)) {}

FeatureTensor::FeatureTensor(std::size_t channels, std::size_t height, std::size_t width,
                             std::vector<double> values)
    : channels_(channels), height_(height), width_(width), values_(std::move(values)) {
  if (channels == 0 || height == 0 || width == 0) {
    throw Error(ErrorCode::kInvalidArgument, "feature tensor dimensions must be >= 1");
  }
  if (values_.size() != channels * height * width) {
    throw Error(ErrorCode::kShapeMismatch, "feature tensor value count does not match shape");
  }
  require_finite(values_, "feature tensor");
}

FeatureVector::FeatureVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::kInvalidArgument, "feature vector must be non-empty");
  require_finite(values_, "feature vector");
}

BilinearTransform::BilinearTransform(std::size_t rows, std::size_t cols,
                                     std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows == 0 || cols == 0 || values_.size() != rows * cols) {
    throw Error(ErrorCode::kShapeMismatch, "bilinear transform shape does not match values");
  }
  require_finite(values_, "bilinear transform");
}

BilinearTransform BilinearTransform::identity(std::size_t n) {
  std::vector<double> values(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) values[i * n + i] = 1.0;
  return BilinearTransform(n, n, std::move(values));
}

std::string_view gate_source_name(GateSource s) noexcept {
  return s == GateSource::kPredicted ? "predicted" : "label";
}

GateDecision::GateDecision(int lc, GateSource source) : lc_(lc), source_(source) {
  if (lc != 0 && lc != 1) {
    throw Error(ErrorCode::kInvalidLabel, "gate decision must be 0 or 1, got " + std::to_string(lc));
  }
}

GateDecision binarize_score(double score, double threshold) {
  return GateDecision(score >= threshold ? 1 : 0, GateSource::kPredicted);
}

SaliencyMap gate_output(const GateDecision& decision, const SaliencyMap& fused_av,
                        const SaliencyMap& v_only) {
  if (fused_av.size() != v_only.size()) {
    throw Error(ErrorCode::kShapeMismatch, "fused and visual-only maps differ in size");
  }
  return decision.fuse() ? fused_av : v_only;
}

FeatureTensor fuse_concat(const FeatureTensor& v, const FeatureVector& a) {
  require_channels(v, a);
  const std::size_t c = v.channels();
  const std::size_t plane = v.plane_size();
  std::vector<double> out(2 * c * plane);
  std::copy(v.values().begin(), v.values().end(), out.begin());
  for (std::size_t ch = 0; ch < c; ++ch) {
    std::fill_n(out.begin() + static_cast<std::ptrdiff_t>((c + ch) * plane), plane, a[ch]);
  }
  return FeatureTensor(2 * c, v.height(), v.width(), std::move(out));
}

std::pair<FeatureTensor, FeatureVector> split_concat(const FeatureTensor& fused) {
  if (fused.channels() % 2 != 0) {
    throw Error(ErrorCode::kChannelMismatch, "concatenated tensor has an odd channel count");
  }
  const std::size_t c = fused.channels() / 2;
  const std::size_t plane = fused.plane_size();
  std::vector<double> visual(fused.values().begin(),
                             fused.values().begin() + static_cast<std::ptrdiff_t>(c * plane));
  std::vector<double> audio(c);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const auto p = fused.plane(c + ch);
    audio[ch] = p[0];
    for (double x : p) {
      if (x != p[0]) throw Error(ErrorCode::kInvalidArgument, "audio half is not spatially constant");
    }
  }
  return {FeatureTensor(c, fused.height(), fused.width(), std::move(visual)),
          FeatureVector(std::move(audio))};
}

FeatureTensor fuse_spatial_align(const FeatureTensor& v, const FeatureVector& a, bool residual) {
  require_channels(v, a);
  FeatureTensor out = v;
  const std::size_t plane = v.plane_size();
  auto values = out.values();
  for (std::size_t ch = 0; ch < v.channels(); ++ch) {
    const double gain = residual ? 1.0 + a[ch] : a[ch];
    for (std::size_t i = 0; i < plane; ++i) values[ch * plane + i] *= gain;
  }
  return out;
}

FeatureVector fuse_bilinear(const FeatureVector& v_flat, const FeatureVector& a,
                            const BilinearTransform& m) {
  if (m.rows() != a.size() || m.cols() != v_flat.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "transform is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                    ", inputs are audio " + std::to_string(a.size()) + " / visual " +
                    std::to_string(v_flat.size()));
  }
  std::vector<double> projected(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) projected[j] += ai * m.at(i, j);
  }
  for (std::size_t j = 0; j < m.cols(); ++j) projected[j] *= v_flat[j];
  return FeatureVector(std::move(projected));
}

GatedStreams run_gated_pipeline(std::span<const GatedFrame> frames,
                                const SaliencyDecoder& decoder) {
  GatedStreams out;
  if (frames.empty()) return out;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!frames[i].visual.same_shape(frames[0].visual) ||
        frames[i].audio.size() != frames[0].audio.size()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "frame " + std::to_string(i) + " has a different feature shape");
    }
  }
  out.v_only.reserve(frames.size());
  out.always_fuse.reserve(frames.size());
  out.gated.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const GatedFrame& f = frames[i];
    try {
      out.v_only.push_back(decoder(i, f.visual, nullptr));
      out.always_fuse.push_back(decoder(i, f.visual, &f.audio));
    } catch (const Error& e) {
      throw Error(e.code(), "frame " + std::to_string(i) + ": " + e.detail());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kDecoderError, "frame " + std::to_string(i) + ": " + e.what());
    }
    out.gated.push_back(gate_output(f.decision, out.always_fuse.back(), out.v_only.back()));
  }
  return out;
}

std::vector<GateDecision> read_gate_track(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<GateDecision> track;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto fields = split_csv_line(trimmed);
    if (line_no == 1 && fields[0] == "frame_index") continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != 3) throw Error(ErrorCode::kParseError, where + ": expected 3 fields");
    const auto frame = parse_unsigned(fields[0]);
    if (!frame) throw Error(ErrorCode::kParseError, where + ": bad frame index");
    if (*frame < track.size()) throw Error(ErrorCode::kDuplicateFrame, where);
    if (*frame > track.size()) throw Error(ErrorCode::kGapInTrack, where);
    const auto lc = parse_integer(fields[1]);
    if (!lc || (*lc != 0 && *lc != 1)) throw Error(ErrorCode::kInvalidLabel, where);
    GateSource source;
    if (fields[2] == "predicted") {
      source = GateSource::kPredicted;
    } else if (fields[2] == "label") {
      source = GateSource::kLabel;
    } else {
      throw Error(ErrorCode::kParseError, where + ": unknown source");
    }
    track.emplace_back(static_cast<int>(*lc), source);
  }
  return track;
}

void write_gate_track(const std::filesystem::path& path, std::span<const GateDecision> track) {
  std::string out = "frame_index,lc,source\n";
  for (std::size_t i = 0; i < track.size(); ++i) {
    out += std::to_string(i) + "," + std::to_string(track[i].lc()) + "," +
           std::string(gate_source_name(track[i].source())) + "\n";
  }
  write_file_bytes(path, out);
}

}  // namespace avcgate
