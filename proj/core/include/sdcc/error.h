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

#ifndef SDCC_ERROR_H_
#define SDCC_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sdcc {

enum class ErrorCode {
  kInvalidArgument,
  kFailedPrecondition,
  kNotFound,
  kSchema,
  kOutOfRange,
  kShape,
  kTransport,
  kProtocol,
  kDegenerateOutput,
  kDiverged,
  kDatasetDegraded,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All toolkit failures surface as sdcc::Error; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sdcc

#endif  // SDCC_ERROR_H_
