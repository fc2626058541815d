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

#ifndef SDCC_BACKBONES_H_
#define SDCC_BACKBONES_H_

#include <cstddef>
#include <optional>
#include <string_view>

#include "sdcc/drs.h"
#include "sdcc/encoder.h"
#include "sdcc/matrix.h"

namespace sdcc {

enum class Backbone { kLastTokens, kCompressionTokens, kMeanPooling };

std::string_view BackboneName(Backbone backbone);
// Accepts "last_tokens", "compression_tokens", "mean_pooling".
Backbone ParseBackbone(std::string_view name);

struct ExtractedFeatures {
  Matrix data;
  Backbone backbone = Backbone::kMeanPooling;
  std::size_t source_length = 0;  // content rows pooled or selected
};

// Last M content rows, order preserved. The sentinel and slots never count.
ExtractedFeatures ExtractLastTokens(const HiddenMatrix& hidden, std::size_t m);

// Exactly the appended slot rows; the slot count must equal m.
ExtractedFeatures ExtractCompressionTokens(const HiddenMatrix& hidden,
                                           std::size_t m);

// Non-overlapping windows of `window` content rows, left to right. The final
// window may be short and is averaged over its actual length.
ExtractedFeatures MeanPool(const HiddenMatrix& hidden, std::size_t window);

enum class Regime { kFixedRatio, kFixedLength, kDiscreteSet };

struct RegimeParams {
  std::optional<double> ratio;              // fixed_ratio
  std::optional<std::size_t> length;        // fixed_length
  std::optional<RatioCandidates> ratios;    // discrete_set, mean pooling
  std::optional<LengthCandidates> lengths;  // discrete_set, token backbones
};

// Number of distinct structural operations (token counts or pool strides)
// a regime induces over context lengths [min_length, max_length]:
//   fixed ratio r, token backbone:   |{round(L / r)}|
//   fixed length M, mean pooling:    |{ceil(L / M)}|
//   discrete set:                    |candidates|
// Fixed ratio with pooling and fixed length with token backbones pin the
// hyperparameter, so they count 1.
std::size_t RegimeOperationCount(Regime regime, Backbone backbone,
                                 std::size_t min_length, std::size_t max_length,
                                 const RegimeParams& params);

}  // namespace sdcc

#endif  // SDCC_BACKBONES_H_
