// Copyright 2026 The Smart Journey Authors
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

#include "smartjourney/error.hpp"

namespace smartjourney {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kSchema: return "schema_error";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kUnknownDistrict: return "unknown_district";
    case ErrorCode::kUnknownModel: return "unknown_model";
    case ErrorCode::kModelNotFound: return "model_not_found";
    case ErrorCode::kInvalidHorizon: return "invalid_horizon";
    case ErrorCode::kInvalidTimestamp: return "invalid_timestamp";
    case ErrorCode::kInsufficientHistory: return "insufficient_history";
    case ErrorCode::kFeatureMismatch: return "feature_mismatch";
    case ErrorCode::kChecksumMismatch: return "checksum_mismatch";
    case ErrorCode::kUnsupportedVersion: return "unsupported_version";
    case ErrorCode::kCorruptArtifact: return "corrupt_artifact";
  }
  return "unknown_error";
}

}  // namespace smartjourney
