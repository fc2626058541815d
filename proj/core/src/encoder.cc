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

#include "sdcc/encoder.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdcc/error.h"
#include "sdcc/random.h"

namespace sdcc {
namespace {

double TokenEmbedding(std::uint64_t seed, TokenId token, std::size_t dim) {
  const std::uint64_t h =
      SplitMix64(SplitMix64(seed ^ (static_cast<std::uint64_t>(token) << 20)) +
                 static_cast<std::uint64_t>(dim));
  return 2.0 * UnitInterval(h) - 1.0;
}

}  // namespace

std::size_t HiddenMatrix::content_rows() const {
  std::size_t n = 0;
  for (PositionRole r : roles) n += r == PositionRole::kContent;
  return n;
}

std::size_t HiddenMatrix::slot_rows() const {
  std::size_t n = 0;
  for (PositionRole r : roles) n += r == PositionRole::kCompressionSlot;
  return n;
}

void HiddenMatrix::Validate() const {
  if (roles.size() != rows()) {
    throw Error(ErrorCode::kShape,
                "role count " + std::to_string(roles.size()) +
                    " != row count " + std::to_string(rows()));
  }
  if (!data.allFinite()) {
    throw Error(ErrorCode::kShape, "hidden matrix has non-finite entries");
  }
  // Roles must be ordered content* sentinel? slot*.
  std::size_t sentinels = 0;
  int phase = 0;
  for (PositionRole r : roles) {
    const int p = r == PositionRole::kContent    ? 0
                  : r == PositionRole::kSentinel ? 1
                                                 : 2;
    if (p < phase) {
      throw Error(ErrorCode::kShape,
                  "row roles out of order (content, sentinel, slots)");
    }
    phase = p;
    sentinels += r == PositionRole::kSentinel;
  }
  if (sentinels > 1) {
    throw Error(ErrorCode::kShape, "more than one sentinel row");
  }
}

void EncoderConfig::Validate() const {
  if (hidden_size < 1 || layers < 1 || mix_window < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "encoder needs hidden_size, layers and mix_window >= 1");
  }
}

TokenSequence PrepareEncoderInput(const TokenSequence& context) {
  if (context.empty()) {
    throw Error(ErrorCode::kFailedPrecondition, "no context to compress");
  }
  TokenSequence out = context;
  out.tokens.push_back(kSentinelId);
  return out;
}

SlotEmbeddings::SlotEmbeddings(std::size_t capacity, std::size_t hidden_size,
                               std::uint64_t seed)
    : table_(capacity, hidden_size) {
  Rng rng(SplitMix64(seed ^ 0x510751075107ULL));
  const double scale = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  for (Eigen::Index i = 0; i < table_.rows(); ++i) {
    for (Eigen::Index k = 0; k < table_.cols(); ++k) {
      table_(i, k) = rng.Normal() * scale;
    }
  }
}

HiddenMatrix ToyEncode(const TokenSequence& prepared,
                       const EncoderConfig& config, std::size_t appended_slots,
                       const SlotEmbeddings& slots) {
  config.Validate();
  if (prepared.empty() || prepared.tokens.back() != kSentinelId) {
    throw Error(ErrorCode::kFailedPrecondition,
                "encoder input must end with the sentinel "
                "(use PrepareEncoderInput)");
  }
  if (appended_slots > slots.capacity()) {
    throw Error(ErrorCode::kOutOfRange,
                "requested " + std::to_string(appended_slots) +
                    " slots, table holds " + std::to_string(slots.capacity()));
  }
  if (appended_slots > 0 && slots.hidden_size() != config.hidden_size) {
    throw Error(ErrorCode::kShape, "slot table width != encoder hidden size");
  }

  const std::size_t base = prepared.size();
  const std::size_t n = base + appended_slots;
  const std::size_t d = config.hidden_size;

  HiddenMatrix out;
  out.data.resize(n, d);
  out.roles.assign(n, PositionRole::kContent);
  for (std::size_t i = 0; i < base; ++i) {
    const TokenId t = prepared.tokens[i];
    if (t >= kVocabSize) {
      throw Error(ErrorCode::kInvalidArgument,
                  "token id " + std::to_string(t) + " outside vocabulary");
    }
    for (std::size_t k = 0; k < d; ++k) {
      out.data(i, k) = TokenEmbedding(config.seed, t, k);
    }
  }
  out.roles[base - 1] = PositionRole::kSentinel;
  for (std::size_t j = 0; j < appended_slots; ++j) {
    out.data.row(base + j) = slots.table().row(j);
    out.roles[base + j] = PositionRole::kCompressionSlot;
  }

  const std::size_t w = config.mix_window;
  const bool causal = config.attention == AttentionMode::kCausal;
  Matrix prefix(n + 1, d);
  Matrix next(n, d);
  for (std::size_t layer = 0; layer < config.layers; ++layer) {
    prefix.row(0).setZero();
    for (std::size_t i = 0; i < n; ++i) {
      prefix.row(i + 1) = prefix.row(i) + out.data.row(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
      const std::size_t hi = causal ? i : std::min(n - 1, i + w - 1);
      const double count = static_cast<double>(hi - lo + 1);
      for (std::size_t k = 0; k < d; ++k) {
        const double mean = (prefix(hi + 1, k) - prefix(lo, k)) / count;
        next(i, k) = std::tanh(out.data(i, k) + mean);
      }
    }
    out.data.swap(next);
  }
  return out;
}

ToyEncoder::ToyEncoder(EncoderConfig config)
    : ToyEncoder(config, SlotEmbeddings(kMaxCompressionSlots,
                                        config.hidden_size, config.seed)) {}

ToyEncoder::ToyEncoder(EncoderConfig config, SlotEmbeddings slots)
    : config_(config), slots_(std::move(slots)) {
  config_.Validate();
}

HiddenMatrix ToyEncoder::Encode(const TokenSequence& prepared,
                                std::size_t appended_slots) const {
  return ToyEncode(prepared, config_, appended_slots, slots_);
}

Vector LastHidden(const HiddenMatrix& hidden) {
  if (hidden.rows() == 0 || hidden.roles.size() != hidden.rows()) {
    throw Error(ErrorCode::kFailedPrecondition, "empty hidden matrix");
  }
  const std::size_t slots = hidden.slot_rows();
  if (slots >= hidden.rows() ||
      hidden.roles[hidden.rows() - slots - 1] != PositionRole::kSentinel) {
    throw Error(ErrorCode::kFailedPrecondition,
                "hidden matrix has no sentinel");
  }
  return hidden.data.row(static_cast<Eigen::Index>(hidden.rows() - slots - 1))
      .transpose();
}

}  // namespace sdcc
