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

#include "avcgate/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "avcgate/error.hpp"

namespace avcgate {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kZeroMass: return "ZeroMass";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kEmptyFixations: return "EmptyFixations";
    case ErrorCode::kAllFixated: return "AllFixated";
    case ErrorCode::kNoNegativePool: return "NoNegativePool";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kBadWindow: return "BadWindow";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kBadRange: return "BadRange";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kChannelMismatch: return "ChannelMismatch";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kDiverged: return "Diverged";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kDuplicateFrame: return "DuplicateFrame";
    case ErrorCode::kGapInTrack: return "GapInTrack";
    case ErrorCode::kInvalidLabel: return "InvalidLabel";
    case ErrorCode::kBadScenario: return "BadScenario";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kPairingError: return "PairingError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kDecoderError: return "DecoderError";
    case ErrorCode::kOutOfBounds: return "OutOfBounds";
  }
  return "Unknown";
}

Grid::Grid(std::size_t width, std::size_t height, double fill)
    : size_{width, height}, values_(width * height, fill) {}

Grid::Grid(std::size_t width, std::size_t height, std::vector<double> values)
    : size_{width, height}, values_(std::move(values)) {
  if (values_.size() != width * height) {
    throw Error(ErrorCode::kShapeMismatch,
                "grid " + std::to_string(width) + "x" + std::to_string(height) +
                    " given " + std::to_string(values_.size()) + " values");
  }
}

double Grid::sum() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double Grid::max() const noexcept {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

double Grid::min() const noexcept {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

SaliencyMap::SaliencyMap(Grid grid) : grid_(std::move(grid)) {
  if (grid_.width() == 0 || grid_.height() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "saliency map must be at least 1x1");
  }
  for (double v : grid_.values()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "saliency values must be finite and non-negative");
    }
  }
}

SaliencyMap::SaliencyMap(std::size_t width, std::size_t height, std::vector<double> values)
    : SaliencyMap(Grid(width, height, std::move(values))) {}

FixationDensity FixationDensity::from_mass(const Grid& grid) {
  const double mass = grid.sum();
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kZeroMass, "map has no mass to normalize");
  }
  Grid out = grid;
  for (double& v : out.values()) {
    if (v < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "density values must be non-negative");
    }
    v /= mass;
  }
  return FixationDensity(std::move(out));
}

namespace {

void check_points(FrameSize frame_size, const std::vector<Point>& points) {
  for (const Point& p : points) {
    if (p.x >= frame_size.width || p.y >= frame_size.height) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fixation (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                      ") outside " + std::to_string(frame_size.width) + "x" +
                      std::to_string(frame_size.height) + " frame");
    }
  }
}

}  // namespace

FixationSet::FixationSet(FrameSize frame_size, std::vector<Point> points)
    : frame_size_(frame_size), points_(std::move(points)) {
  check_points(frame_size_, points_);
  std::vector<Point> sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate fixation point");
  }
}

FixationSet FixationSet::deduplicated(FrameSize frame_size, std::vector<Point> points) {
  std::vector<Point> unique;
  unique.reserve(points.size());
  for (const Point& p : points) {
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
  }
  return FixationSet(frame_size, std::move(unique));
}

std::vector<std::size_t> FixationSet::linear_indices() const {
  std::vector<std::size_t> idx;
  idx.reserve(points_.size());
  for (const Point& p : points_) idx.push_back(p.y * frame_size_.width + p.x);
  std::sort(idx.begin(), idx.end());
  return idx;
}

FixationDensity normalize_density(const SaliencyMap& map) {
  return FixationDensity::from_mass(map.grid());
}

Grid gaussian_blur(const Grid& grid, double sigma) {
  if (!(sigma > 0.0)) return grid;
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    kernel[static_cast<std::size_t>(k + radius)] =
        std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
  }
  double kernel_sum = 0.0;
  for (double v : kernel) kernel_sum += v;
  for (double& v : kernel) v /= kernel_sum;
  const auto w = static_cast<std::ptrdiff_t>(grid.width());
  const auto h = static_cast<std::ptrdiff_t>(grid.height());

  Grid horizontal(grid.width(), grid.height());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const std::ptrdiff_t xx = x + k;
        if (xx < 0 || xx >= w) continue;
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               grid.at(static_cast<std::size_t>(xx), static_cast<std::size_t>(y));
      }
      horizontal.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  }
  Grid out(grid.width(), grid.height());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
        const std::ptrdiff_t yy = y + k;
        if (yy < 0 || yy >= h) continue;
        acc += kernel[static_cast<std::size_t>(k + radius)] *
               horizontal.at(static_cast<std::size_t>(x), static_cast<std::size_t>(yy));
      }
      out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = acc;
    }
  }
  return out;
}

FixationDensity density_from_fixations(const FixationSet& fixations,
                                       const BlurOptions& options) {
  if (fixations.empty()) {
    throw Error(ErrorCode::kEmptyFixations, "cannot build a density without fixations");
  }
  const FrameSize size = fixations.frame_size();
  Grid impulses(size.width, size.height);
  for (const Point& p : fixations.points()) impulses.at(p.x, p.y) = 1.0;
  return FixationDensity::from_mass(gaussian_blur(impulses, options.sigma_pixels()));
}

}  // namespace avcgate
