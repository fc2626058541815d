// Copyright 2026 The SDCC Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sdcc/error.h"

namespace sdcc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kFailedPrecondition:
      return "failed_precondition";
    case ErrorCode::kNotFound:
      return "not_found";
    case ErrorCode::kSchema:
      return "schema";
    case ErrorCode::kOutOfRange:
      return "out_of_range";
    case ErrorCode::kShape:
      return "shape";
    case ErrorCode::kTransport:
      return "transport";
    case ErrorCode::kProtocol:
      return "protocol";
    case ErrorCode::kDegenerateOutput:
      return "degenerate_output";
    case ErrorCode::kDiverged:
      return "diverged";
    case ErrorCode::kDatasetDegraded:
      return "dataset_degraded";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace sdcc
