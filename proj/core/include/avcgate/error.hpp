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

#ifndef AVCGATE_ERROR_HPP_
#define AVCGATE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace avcgate {

enum class ErrorCode {
  kZeroMass,
  kZeroVariance,
  kShapeMismatch,
  kEmptyFixations,
  kAllFixated,
  kNoNegativePool,
  kLengthMismatch,
  kInvalidArgument,
  kBadWindow,
  kTooShort,
  kBadRange,
  kEmptyAudio,
  kChannelMismatch,
  kTooSmall,
  kSingleClass,
  kDiverged,
  kParseError,
  kMissingField,
  kDuplicateFrame,
  kGapInTrack,
  kInvalidLabel,
  kBadScenario,
  kDecodeError,
  kIoError,
  kPairingError,
  kConfigError,
  kDecoderError,
  kOutOfBounds,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace avcgate

#endif  // AVCGATE_ERROR_HPP_
