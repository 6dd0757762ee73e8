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

// Small text helpers shared by the CSV and manifest readers.

#ifndef AVCGATE_TEXT_HPP_
#define AVCGATE_TEXT_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace avcgate {

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split_csv_line(std::string_view line);
std::vector<std::string_view> split_whitespace(std::string_view line);

std::optional<std::size_t> parse_unsigned(std::string_view s);
std::optional<long long> parse_integer(std::string_view s);
std::optional<double> parse_double(std::string_view s);

// Shortest representation that round-trips exactly.
std::string format_double(double v);
// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

}  // namespace avcgate

#endif  // AVCGATE_TEXT_HPP_
