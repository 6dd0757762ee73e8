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

#ifndef AVCGATE_FFT_HPP_
#define AVCGATE_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace avcgate {

constexpr bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 forward DFT (no scaling). Size must be a power
// of two.
void fft_inplace(std::span<std::complex<double>> data);

// |X_k| for k = 0 .. n/2 of a real sequence of power-of-two length n.
std::vector<double> real_fft_magnitude(std::span<const double> frame);

}  // namespace avcgate

#endif  // AVCGATE_FFT_HPP_
