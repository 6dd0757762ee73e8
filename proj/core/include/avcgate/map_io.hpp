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

// File formats for maps and fixations.
//
//  * Portable graymap/pixmap (P5/P6, 8- or 16-bit). Values are rescaled to
//    [0, 1]; pixmaps are averaged to gray.
//  * Raw float matrix: 8-byte header of two little-endian uint32 (height,
//    width) followed by height*width little-endian float32, row-major.
//  * Fixation CSV: `frame_index,x,y` rows, optional header line.

#ifndef AVCGATE_MAP_IO_HPP_
#define AVCGATE_MAP_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "avcgate/grid.hpp"

namespace avcgate {

Grid read_pnm(const std::filesystem::path& path);
Grid parse_pnm(std::string_view bytes);
// Writes 8-bit P5, values clamped to [0, 1].
void write_pgm(const std::filesystem::path& path, const Grid& grid);
std::string encode_pgm(const Grid& grid);

Grid read_float_matrix(const std::filesystem::path& path);
Grid parse_float_matrix(std::string_view bytes);
void write_float_matrix(const std::filesystem::path& path, const Grid& grid);
std::string encode_float_matrix(const Grid& grid);

// Dispatches on extension: .pgm/.ppm/.pnm are images, anything else is
// read as a raw float matrix.
SaliencyMap read_saliency_map(const std::filesystem::path& path);

// One FixationSet per frame in [0, n_frames). Frames with no rows come back
// empty. Out-of-range frames or coordinates raise OutOfBounds and malformed
// rows ParseError, both with the line number.
std::vector<FixationSet> read_fixation_csv(const std::filesystem::path& path,
                                           FrameSize frame_size, std::size_t n_frames);
std::vector<FixationSet> parse_fixation_csv(std::istream& in, FrameSize frame_size,
                                            std::size_t n_frames);
void write_fixation_csv(const std::filesystem::path& path,
                        const std::vector<FixationSet>& per_frame);

// Whole-file read; IoError when the file cannot be opened.
std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::string_view bytes);

}  // namespace avcgate

#endif  // AVCGATE_MAP_IO_HPP_
