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

// Dense 2-D grids and the fixation ground-truth types built on them.

#ifndef AVCGATE_GRID_HPP_
#define AVCGATE_GRID_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace avcgate {

struct FrameSize {
  std::size_t width = 0;
  std::size_t height = 0;

  std::size_t area() const noexcept { return width * height; }
  bool operator==(const FrameSize&) const = default;
};

// Row-major grid of reals. No value constraints; the typed wrappers below
// add them.
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, double fill = 0.0);
  Grid(std::size_t width, std::size_t height, std::vector<double> values);

  std::size_t width() const noexcept { return size_.width; }
  std::size_t height() const noexcept { return size_.height; }
  FrameSize size() const noexcept { return size_; }
  std::size_t area() const noexcept { return values_.size(); }

  double& at(std::size_t x, std::size_t y) { return values_[y * size_.width + x]; }
  double at(std::size_t x, std::size_t y) const { return values_[y * size_.width + x]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  double sum() const noexcept;
  double max() const noexcept;
  double min() const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  FrameSize size_;
  std::vector<double> values_;
};

// A model's per-frame prediction: finite, non-negative, at least 1x1.
class SaliencyMap {
 public:
  SaliencyMap() = default;
  explicit SaliencyMap(Grid grid);
  SaliencyMap(std::size_t width, std::size_t height, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t width() const noexcept { return grid_.width(); }
  std::size_t height() const noexcept { return grid_.height(); }
  FrameSize size() const noexcept { return grid_.size(); }
  std::span<const double> values() const noexcept { return grid_.values(); }
  double at(std::size_t x, std::size_t y) const { return grid_.at(x, y); }

  bool operator==(const SaliencyMap&) const = default;

 private:
  Grid grid_;
};

// Ground-truth fixation distribution; values sum to 1.
class FixationDensity {
 public:
  FixationDensity() = default;

  // Normalizes `grid` to unit mass. Throws ZeroMass when the grid sums to 0.
  static FixationDensity from_mass(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  FrameSize size() const noexcept { return grid_.size(); }
  std::span<const double> values() const noexcept { return grid_.values(); }

  bool operator==(const FixationDensity&) const = default;

 private:
  explicit FixationDensity(Grid grid) : grid_(std::move(grid)) {}
  Grid grid_;
};

struct Point {
  std::size_t x = 0;  // column
  std::size_t y = 0;  // row

  auto operator<=>(const Point&) const = default;
};

// Fixated pixel coordinates for one frame. Points are unique and in bounds.
class FixationSet {
 public:
  FixationSet() = default;
  FixationSet(FrameSize frame_size, std::vector<Point> points);

  // Builds a set while dropping repeated coordinates instead of throwing.
  static FixationSet deduplicated(FrameSize frame_size, std::vector<Point> points);

  FrameSize frame_size() const noexcept { return frame_size_; }
  std::span<const Point> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  // Row-major indices of the fixated pixels, ascending.
  std::vector<std::size_t> linear_indices() const;

  bool operator==(const FixationSet&) const = default;

 private:
  FrameSize frame_size_;
  std::vector<Point> points_;
};

// Normalizes any non-negative map to unit mass (throws ZeroMass).
FixationDensity normalize_density(const SaliencyMap& map);

struct BlurOptions {
  double pixels_per_degree = 30.0;
  double sigma_degrees = 1.0;

  double sigma_pixels() const noexcept { return pixels_per_degree * sigma_degrees; }
};

// Gaussian-blurred fixation map normalized to unit mass.
FixationDensity density_from_fixations(const FixationSet& fixations,
                                       const BlurOptions& options = {});

// Separable Gaussian blur, kernel truncated at 3 sigma, zero outside the
// frame. sigma <= 0 returns the input unchanged.
Grid gaussian_blur(const Grid& grid, double sigma);

}  // namespace avcgate

#endif  // AVCGATE_GRID_HPP_
