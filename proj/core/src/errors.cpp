// Copyright 2026 The posedtw Authors
// SPDX-License-Identifier: Apache-2.0

#include "posedtw/errors.hpp"

namespace posedtw {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateFrame: return "DegenerateFrame";
    case ErrorCode::kUnimputableJoint: return "UnimputableJoint";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kSequenceTooShort: return "SequenceTooShort";
    case ErrorCode::kEmptyGallery: return "EmptyGallery";
    case ErrorCode::kMissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, std::string(to_string(code)) + ": " + message);
}

}  // namespace posedtw
