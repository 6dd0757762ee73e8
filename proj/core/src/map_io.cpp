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

#include "avcgate/map_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "avcgate/error.hpp"
#include "avcgate/text.hpp"

namespace avcgate {

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return std::move(buffer).str();
}

void write_file_bytes(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

namespace {

class PnmHeaderReader {
 public:
  explicit PnmHeaderReader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view magic() {
    if (bytes_.size() < 2) fail("truncated header");
    pos_ = 2;
    return bytes_.substr(0, 2);
  }

  std::size_t number() {
    skip_space_and_comments();
    std::size_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(bytes_.data() + pos_, bytes_.data() + bytes_.size(), value);
    if (ec != std::errc()) fail("bad header number");
    pos_ = static_cast<std::size_t>(ptr - bytes_.data());
    return value;
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      fail("missing raster separator");
    }
    return pos_ + 1;
  }

  [[noreturn]] static void fail(const std::string& what) {
    throw Error(ErrorCode::kDecodeError, "pnm: " + what);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

template <typename T>
T load_le(const char* p) {
  char buf[sizeof(T)];
  std::memcpy(buf, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

template <typename T>
void store_le(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  out.append(buf, sizeof(T));
}

}  // namespace

Grid parse_pnm(std::string_view bytes) {
  PnmHeaderReader header(bytes);
  const std::string_view magic = header.magic();
  std::size_t channels = 0;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    PnmHeaderReader::fail("unsupported magic '" + std::string(magic) + "'");
  }
  const std::size_t width = header.number();
  const std::size_t height = header.number();
  const std::size_t maxval = header.number();
  if (width == 0 || height == 0) PnmHeaderReader::fail("zero dimension");
  if (maxval == 0 || maxval > 65535) PnmHeaderReader::fail("maxval out of range");
  const std::size_t offset = header.raster_offset();
  const std::size_t sample_bytes = maxval > 255 ? 2 : 1;
  const std::size_t needed = width * height * channels * sample_bytes;
  if (bytes.size() < offset + needed) PnmHeaderReader::fail("truncated raster");

  const auto* raster = reinterpret_cast<const unsigned char*>(bytes.data() + offset);
  const double scale = 1.0 / static_cast<double>(maxval);
  std::vector<double> values(width * height);
  for (std::size_t i = 0; i < width * height; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const std::size_t s = i * channels + c;
      // 16-bit samples are big-endian.
      const unsigned sample = sample_bytes == 2
                                  ? (unsigned{raster[2 * s]} << 8) | raster[2 * s + 1]
                                  : unsigned{raster[s]};
      acc += static_cast<double>(std::min<unsigned>(sample, static_cast<unsigned>(maxval)));
    }
    values[i] = acc / static_cast<double>(channels) * scale;
  }
  return Grid(width, height, std::move(values));
}

Grid read_pnm(const std::filesystem::path& path) {
  try {
    return parse_pnm(read_file_bytes(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDecodeError) {
      throw Error(ErrorCode::kDecodeError, path.string() + ": " + e.detail());
    }
    throw;
  }
}

std::string encode_pgm(const Grid& grid) {
  std::string out = "P5\n" + std::to_string(grid.width()) + " " +
                    std::to_string(grid.height()) + "\n255\n";
  out.reserve(out.size() + grid.area());
  for (double v : grid.values()) {
    const double clamped = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(clamped * 255.0))));
  }
  return out;
}

void write_pgm(const std::filesystem::path& path, const Grid& grid) {
  write_file_bytes(path, encode_pgm(grid));
}

Grid parse_float_matrix(std::string_view bytes) {
  if (bytes.size() < 8) throw Error(ErrorCode::kDecodeError, "float matrix: missing header");
  const auto height = load_le<std::uint32_t>(bytes.data());
  const auto width = load_le<std::uint32_t>(bytes.data() + 4);
  const std::size_t count = std::size_t{height} * width;
  if (bytes.size() != 8 + 4 * count) {
    throw Error(ErrorCode::kDecodeError,
                "float matrix: header says " + std::to_string(height) + "x" +
                    std::to_string(width) + " but payload is " +
                    std::to_string(bytes.size() - 8) + " bytes");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = static_cast<double>(load_le<float>(bytes.data() + 8 + 4 * i));
  }
  return Grid(width, height, std::move(values));
}

Grid read_float_matrix(const std::filesystem::path& path) {
  return parse_float_matrix(read_file_bytes(path));
}

std::string encode_float_matrix(const Grid& grid) {
  std::string out;
  out.reserve(8 + 4 * grid.area());
  store_le(out, static_cast<std::uint32_t>(grid.height()));
  store_le(out, static_cast<std::uint32_t>(grid.width()));
  for (double v : grid.values()) store_le(out, static_cast<float>(v));
  return out;
}

void write_float_matrix(const std::filesystem::path& path, const Grid& grid) {
  write_file_bytes(path, encode_float_matrix(grid));
}

SaliencyMap read_saliency_map(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") return SaliencyMap(read_pnm(path));
  return SaliencyMap(read_float_matrix(path));
}

std::vector<FixationSet> parse_fixation_csv(std::istream& in, FrameSize frame_size,
                                            std::size_t n_frames) {
  std::vector<std::vector<Point>> points(n_frames);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto fields = split_csv_line(trimmed);
    if (line_no == 1 && !fields.empty() && trim(fields[0]) == "frame_index") continue;
    if (fields.size() != 3) {
      throw Error(ErrorCode::kParseError,
                  "fixation csv line " + std::to_string(line_no) + ": expected 3 fields");
    }
    const auto frame = parse_unsigned(fields[0]);
    const auto x = parse_unsigned(fields[1]);
    const auto y = parse_unsigned(fields[2]);
    if (!frame || !x || !y) {
      throw Error(ErrorCode::kParseError,
                  "fixation csv line " + std::to_string(line_no) + ": non-integer field");
    }
    if (*frame >= n_frames || *x >= frame_size.width || *y >= frame_size.height) {
      throw Error(ErrorCode::kOutOfBounds,
                  "fixation csv line " + std::to_string(line_no) + ": out of range");
    }
    points[*frame].push_back({*x, *y});
  }
  std::vector<FixationSet> out;
  out.reserve(n_frames);
  for (auto& p : points) out.push_back(FixationSet::deduplicated(frame_size, std::move(p)));
  return out;
}

std::vector<FixationSet> read_fixation_csv(const std::filesystem::path& path,
                                           FrameSize frame_size, std::size_t n_frames) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return parse_fixation_csv(in, frame_size, n_frames);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void write_fixation_csv(const std::filesystem::path& path,
                        const std::vector<FixationSet>& per_frame) {
  std::string out = "frame_index,x,y\n";
  for (std::size_t f = 0; f < per_frame.size(); ++f) {
    for (const Point& p : per_frame[f].points()) {
      out += std::to_string(f) + "," + std::to_string(p.x) + "," + std::to_string(p.y) + "\n";
    }
  }
  write_file_bytes(path, out);
}

}  // namespace avcgate
