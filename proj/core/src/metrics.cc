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

#include "sdcc/metrics.h"

#include <cmath>

#include "sdcc/error.h"

namespace sdcc {
namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string NormalizeAnswerText(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    if (c >= 'A' && c <= 'Z') c = static_cast<unsigned char>(c - 'A' + 'a');
    out.push_back(static_cast<char>(c));
  }
  return out;
}

int SubstringAccuracy(std::string_view output,
                      std::span<const std::string> answers) {
  if (answers.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "record has no reference answers");
  }
  const std::string haystack = NormalizeAnswerText(output);
  for (const std::string& answer : answers) {
    if (haystack.find(NormalizeAnswerText(answer)) != std::string::npos) {
      return 1;
    }
  }
  return 0;
}

std::optional<double> ValidityFilteredRatio(
    std::span<const EvalRecord> records) {
  double original = 0.0;
  double compressed = 0.0;
  bool any = false;
  for (const EvalRecord& r : records) {
    if (r.correct != 1) continue;
    any = true;
    original += static_cast<double>(r.original_length);
    compressed += static_cast<double>(r.compressed_length);
  }
  if (!any) return std::nullopt;
  if (compressed <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "correct records with zero compressed length");
  }
  return original / compressed;
}

double RatioLog2Variance(std::span<const CompressionPlan> plans) {
  if (plans.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "variance of an empty plan list");
  }
  const double n = static_cast<double>(plans.size());
  double mean = 0.0;
  for (const CompressionPlan& p : plans) mean += std::log2(p.SelectedFactor());
  mean /= n;
  double acc = 0.0;
  for (const CompressionPlan& p : plans) {
    const double d = std::log2(p.SelectedFactor()) - mean;
    acc += d * d;
  }
  return acc / n;
}

}  // namespace sdcc
