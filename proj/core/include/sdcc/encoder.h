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

#ifndef SDCC_ENCODER_H_
#define SDCC_ENCODER_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sdcc/matrix.h"
#include "sdcc/tokenizer.h"

namespace sdcc {

enum class PositionRole : std::uint8_t {
  kContent,
  kSentinel,
  kCompressionSlot,
};

enum class AttentionMode { kCausal, kBidirectional };

// Encoder output: one row per encoder input position. Layout is always
// [content..., sentinel, compression_slot...].
struct HiddenMatrix {
  Matrix data;
  std::vector<PositionRole> roles;

  std::size_t rows() const { return static_cast<std::size_t>(data.rows()); }
  std::size_t hidden_size() const {
    return static_cast<std::size_t>(data.cols());
  }
  std::size_t content_rows() const;
  std::size_t slot_rows() const;

  // Throws kShape if roles and data disagree or the layout is broken
  // (non-finite entries, slots not trailing, more than one sentinel).
  void Validate() const;
};

struct EncoderConfig {
  std::size_t hidden_size = 32;
  std::size_t layers = 2;
  AttentionMode attention = AttentionMode::kBidirectional;
  std::size_t mix_window = 4;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Appends the sentinel unconditionally. Throws kFailedPrecondition on empty.
TokenSequence PrepareEncoderInput(const TokenSequence& context);

// Per-position trainable vectors for appended compression slots. Initialized
// from a seeded unit normal scaled by 1/sqrt(d).
class SlotEmbeddings {
 public:
  SlotEmbeddings() = default;
  SlotEmbeddings(std::size_t capacity, std::size_t hidden_size,
                 std::uint64_t seed);

  std::size_t capacity() const {
    return static_cast<std::size_t>(table_.rows());
  }
  std::size_t hidden_size() const {
    return static_cast<std::size_t>(table_.cols());
  }
  const Matrix& table() const { return table_; }
  Matrix& mutable_table() { return table_; }

 private:
  Matrix table_;
};

// Common surface for the built-in toy encoder and remote (bridge) encoders.
class Encoder {
 public:
  virtual ~Encoder() = default;

  // tokens must come from PrepareEncoderInput.
  virtual HiddenMatrix Encode(const TokenSequence& prepared,
                              std::size_t appended_slots) const = 0;
  virtual std::size_t hidden_size() const = 0;
  virtual AttentionMode attention_mode() const = 0;
};

// Deterministic stand-in for a transformer encoder:
//   row_i <- hash embedding of token i (slot table row for appended slots)
//   repeat layers times: row_i <- tanh(row_i + mean(row_j, j in window(i)))
// where window(i) = [i-w+1, i] (causal) or [i-w+1, i+w-1] (bidirectional),
// clipped to the sequence, with w = mix_window.
HiddenMatrix ToyEncode(const TokenSequence& prepared,
                       const EncoderConfig& config, std::size_t appended_slots,
                       const SlotEmbeddings& slots);

class ToyEncoder final : public Encoder {
 public:
  explicit ToyEncoder(EncoderConfig config);
  ToyEncoder(EncoderConfig config, SlotEmbeddings slots);

  HiddenMatrix Encode(const TokenSequence& prepared,
                      std::size_t appended_slots) const override;
  std::size_t hidden_size() const override { return config_.hidden_size; }
  AttentionMode attention_mode() const override { return config_.attention; }

  const EncoderConfig& config() const { return config_; }
  const SlotEmbeddings& slots() const { return slots_; }
  // Exclusive access only; concurrent Encode calls must not overlap.
  SlotEmbeddings& mutable_slots() { return slots_; }

 private:
  EncoderConfig config_;
  SlotEmbeddings slots_;
};

// Hidden state of the sentinel, i.e. the last non-slot row.
Vector LastHidden(const HiddenMatrix& hidden);

}  // namespace sdcc

#endif  // SDCC_ENCODER_H_
