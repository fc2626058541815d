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

#ifndef SDCC_TOKENIZER_H_
#define SDCC_TOKENIZER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sdcc {

using TokenId = std::uint32_t;

// Reserved ids live above the 256 byte values.
inline constexpr TokenId kByteVocabSize = 256;
inline constexpr TokenId kSentinelId = 256;     // end-of-context marker
inline constexpr TokenId kPlaceholderId = 257;  // single prompt placeholder
inline constexpr TokenId kLatentSlotId = 258;   // expanded placeholder position
inline constexpr TokenId kCompressionSlotBase = 259;
inline constexpr std::size_t kMaxCompressionSlots = 1024;
inline constexpr TokenId kVocabSize =
    kCompressionSlotBase + static_cast<TokenId>(kMaxCompressionSlots);

inline constexpr std::string_view kByteTokenizerId = "byte-v1";

struct TokenSequence {
  std::vector<TokenId> tokens;
  std::string tokenizer_id{kByteTokenizerId};

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  TokenId operator[](std::size_t i) const { return tokens[i]; }

  friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

class Tokenizer {
 public:
  virtual ~Tokenizer() = default;

  virtual TokenSequence Tokenize(std::string_view text) const = 0;
  // Throws kInvalidArgument for ids that have no textual form.
  virtual std::string Detokenize(const TokenSequence& tokens) const = 0;
  virtual std::string_view id() const = 0;
  virtual TokenId vocab_size() const = 0;
};

// Each byte maps to its own value. Round-trips any byte string, so any
// UTF-8 input survives Detokenize(Tokenize(x)) unchanged.
class ByteTokenizer final : public Tokenizer {
 public:
  TokenSequence Tokenize(std::string_view text) const override;
  std::string Detokenize(const TokenSequence& tokens) const override;
  std::string_view id() const override { return kByteTokenizerId; }
  TokenId vocab_size() const override { return kVocabSize; }
};

}  // namespace sdcc

#endif  // SDCC_TOKENIZER_H_
