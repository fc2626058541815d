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

#include "sdcc/backbones.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "sdcc/error.h"

namespace sdcc {
namespace {

// Content rows lead the matrix; returns how many there are.
std::size_t LeadingContentRows(const HiddenMatrix& hidden) {
  if (hidden.roles.size() != hidden.rows()) {
    throw Error(ErrorCode::kShape, "role count does not match row count");
  }
  std::size_t n = 0;
  while (n < hidden.rows() && hidden.roles[n] == PositionRole::kContent) ++n;
  return n;
}

bool IsTokenBackbone(Backbone b) { return b != Backbone::kMeanPooling; }

}  // namespace

std::string_view BackboneName(Backbone backbone) {
  switch (backbone) {
    case Backbone::kLastTokens:
      return "last_tokens";
    case Backbone::kCompressionTokens:
      return "compression_tokens";
    case Backbone::kMeanPooling:
      return "mean_pooling";
  }
  return "unknown";
}

Backbone ParseBackbone(std::string_view name) {
  if (name == "last_tokens") return Backbone::kLastTokens;
  if (name == "compression_tokens") return Backbone::kCompressionTokens;
  if (name == "mean_pooling") return Backbone::kMeanPooling;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown backbone \"" + std::string(name) + "\"");
}

ExtractedFeatures ExtractLastTokens(const HiddenMatrix& hidden, std::size_t m) {
  const std::size_t content = LeadingContentRows(hidden);
  if (m < 1 || m > content) {
    throw Error(
        ErrorCode::kOutOfRange,
        "last_tokens needs 1 <= M <= content rows (M=" + std::to_string(m) +
            ", content=" + std::to_string(content) + ")");
  }
  ExtractedFeatures out;
  out.backbone = Backbone::kLastTokens;
  out.source_length = m;
  out.data = hidden.data.middleRows(static_cast<Eigen::Index>(content - m),
                                    static_cast<Eigen::Index>(m));
  return out;
}

ExtractedFeatures ExtractCompressionTokens(const HiddenMatrix& hidden,
                                           std::size_t m) {
  const std::size_t slots = hidden.slot_rows();
  if (slots == 0) {
    throw Error(ErrorCode::kFailedPrecondition,
                "hidden matrix carries no compression slots");
  }
  if (slots != m) {
    throw Error(ErrorCode::kFailedPrecondition,
                "compression slot count " + std::to_string(slots) +
                    " != requested M " + std::to_string(m));
  }
  ExtractedFeatures out;
  out.backbone = Backbone::kCompressionTokens;
  out.source_length = m;
  out.data = hidden.data.bottomRows(static_cast<Eigen::Index>(m));
  return out;
}

ExtractedFeatures MeanPool(const HiddenMatrix& hidden, std::size_t window) {
  if (window < 1) {
    throw Error(ErrorCode::kInvalidArgument, "pool size must be >= 1");
  }
  const std::size_t content = LeadingContentRows(hidden);
  if (content == 0) {
    throw Error(ErrorCode::kFailedPrecondition, "no content rows to pool");
  }
  const std::size_t m = (content + window - 1) / window;
  const Eigen::Index d = hidden.data.cols();

  ExtractedFeatures out;
  out.backbone = Backbone::kMeanPooling;
  out.source_length = content;
  out.data.resize(static_cast<Eigen::Index>(m), d);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lo = i * window;
    const std::size_t hi = std::min(content, lo + window);
    auto row = out.data.row(static_cast<Eigen::Index>(i));
    row.setZero();
    for (std::size_t j = lo; j < hi; ++j) {
      row += hidden.data.row(static_cast<Eigen::Index>(j));
    }
    row /= static_cast<double>(hi - lo);
  }
  return out;
}

std::size_t RegimeOperationCount(Regime regime, Backbone backbone,
                                 std::size_t min_length, std::size_t max_length,
                                 const RegimeParams& params) {
  if (min_length > max_length) {
    throw Error(ErrorCode::kInvalidArgument, "min_length > max_length");
  }
  switch (regime) {
    case Regime::kFixedRatio: {
      if (!params.ratio || !(*params.ratio > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "fixed_ratio regime needs a positive ratio");
      }
      if (!IsTokenBackbone(backbone)) return 1;  // S is the ratio itself
      std::set<long long> counts;
      for (std::size_t len = min_length; len <= max_length; ++len) {
        counts.insert(std::llround(static_cast<double>(len) / *params.ratio));
      }
      return counts.size();
    }
    case Regime::kFixedLength: {
      if (!params.length || *params.length < 1) {
        throw Error(ErrorCode::kInvalidArgument,
                    "fixed_length regime needs a length >= 1");
      }
      if (IsTokenBackbone(backbone)) return 1;  // M is the length itself
      std::set<std::size_t> strides;
      const std::size_t m = *params.length;
      for (std::size_t len = min_length; len <= max_length; ++len) {
        strides.insert((len + m - 1) / m);
      }
      return strides.size();
    }
    case Regime::kDiscreteSet: {
      if (IsTokenBackbone(backbone)) {
        if (!params.lengths) {
          throw Error(ErrorCode::kInvalidArgument,
                      "token backbones select from a length candidate set");
        }
        return params.lengths->size();
      }
      if (!params.ratios) {
        throw Error(ErrorCode::kInvalidArgument,
                    "mean pooling selects from a ratio candidate set");
      }
      return params.ratios->size();
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown regime");
}

}  // namespace sdcc
