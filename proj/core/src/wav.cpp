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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "avcgate/audio.hpp"
#include "avcgate/error.hpp"
#include "avcgate/map_io.hpp"

namespace avcgate {
namespace {

[[noreturn]] void bad_wav(const std::string& what) {
  throw Error(ErrorCode::kDecodeError, "wav: " + what);
}

std::uint32_t u32(std::string_view b, std::size_t at) {
  if (at + 4 > b.size()) bad_wav("truncated");
  const auto* p = reinterpret_cast<const unsigned char*>(b.data() + at);
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
         (std::uint32_t{p[3]} << 24);
}

std::uint16_t u16(std::string_view b, std::size_t at) {
  if (at + 2 > b.size()) bad_wav("truncated");
  const auto* p = reinterpret_cast<const unsigned char*>(b.data() + at);
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace

AudioClip parse_wav(std::string_view bytes) {
  if (bytes.size() < 12 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    bad_wav("not a RIFF/WAVE file");
  }
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::string_view data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string_view id = bytes.substr(pos, 4);
    const std::uint32_t size = u32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) bad_wav("chunk overruns file");
    if (id == "fmt ") {
      if (size < 16) bad_wav("fmt chunk too small");
      std::uint16_t format = u16(bytes, body);
      channels = u16(bytes, body + 2);
      rate = u32(bytes, body + 4);
      bits = u16(bytes, body + 14);
      if (format == 0xFFFE && size >= 26) format = u16(bytes, body + 24);
      if (format != 1) bad_wav("only PCM is supported");
      have_fmt = true;
    } else if (id == "data") {
      data = bytes.substr(body, size);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) bad_wav("missing fmt chunk");
  if (!have_data) bad_wav("missing data chunk");
  if (bits != 16) bad_wav(std::to_string(bits) + "-bit samples; expected 16-bit PCM");
  if (channels == 0 || rate == 0) bad_wav("zero channels or sample rate");

  const std::size_t frame_bytes = 2u * channels;
  const std::size_t n = data.size() / frame_bytes;
  AudioClip clip;
  clip.sample_rate = static_cast<double>(rate);
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const auto raw = static_cast<std::int16_t>(u16(data, i * frame_bytes + 2 * c));
      acc += static_cast<double>(raw) / 32768.0;
    }
    clip.samples[i] = acc / static_cast<double>(channels);
  }
  return clip;
}

AudioClip read_wav(const std::filesystem::path& path) {
  try {
    return parse_wav(read_file_bytes(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDecodeError) {
      throw Error(ErrorCode::kDecodeError, path.string() + ": " + e.detail());
    }
    throw;
  }
}

std::string encode_wav(const AudioClip& clip) {
  const auto rate = static_cast<std::uint32_t>(std::lround(clip.sample_rate));
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, 1);         // PCM
  put_u16(out, 1);         // mono
  put_u32(out, rate);
  put_u32(out, rate * 2);  // byte rate
  put_u16(out, 2);         // block align
  put_u16(out, 16);
  out += "data";
  put_u32(out, data_bytes);
  for (double s : clip.samples) {
    const double clamped = std::clamp(std::isfinite(s) ? s : 0.0, -1.0, 1.0);
    const auto q = static_cast<std::int16_t>(std::clamp(std::lround(clamped * 32768.0), -32768L, 32767L));
    put_u16(out, static_cast<std::uint16_t>(q));
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
  write_file_bytes(path, encode_wav(clip));
}

}  // namespace avcgate
