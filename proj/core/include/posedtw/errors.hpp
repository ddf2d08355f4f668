// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace posedtw {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateFrame,
  kUnimputableJoint,
  kEmptySequence,
  kSequenceTooShort,
  kEmptyGallery,
  kMissingGroundTruth,
  kParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Domain error raised by every posedtw operation. The code identifies the
/// failure class; the message carries the specifics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace posedtw
