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

#ifndef SDCC_METRICS_H_
#define SDCC_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sdcc/drs.h"
#include "sdcc/records.h"

namespace sdcc {

// Trim, collapse whitespace runs to one space, ASCII case-fold. Bytes >= 0x80
// pass through unchanged.
std::string NormalizeAnswerText(std::string_view text);

// 1 iff some normalized answer occurs as a contiguous substring of the
// normalized output. No word-boundary check. answers must be non-empty.
int SubstringAccuracy(std::string_view output,
                      std::span<const std::string> answers);

struct EvalRecord {
  QARecord record;
  CompressionPlan plan;
  std::string output_text;
  int correct = 0;
  std::size_t original_length = 0;
  std::size_t compressed_length = 0;
};

// Sum of original lengths over correct records divided by the sum of their
// compressed lengths. nullopt when nothing is correct.
std::optional<double> ValidityFilteredRatio(
    std::span<const EvalRecord> records);

// Population variance of log2(selected factor). Throws on an empty list.
double RatioLog2Variance(std::span<const CompressionPlan> plans);

}  // namespace sdcc

#endif  // SDCC_METRICS_H_
