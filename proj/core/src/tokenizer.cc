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

#include "sdcc/tokenizer.h"

#include <string>

#include "sdcc/error.h"

namespace sdcc {

TokenSequence ByteTokenizer::Tokenize(std::string_view text) const {
  TokenSequence out;
  out.tokens.reserve(text.size());
  for (char c : text) {
    out.tokens.push_back(static_cast<unsigned char>(c));
  }
  return out;
}

std::string ByteTokenizer::Detokenize(const TokenSequence& tokens) const {
  std::string out;
  out.reserve(tokens.size());
  for (TokenId id : tokens.tokens) {
    if (id >= kByteVocabSize) {
      throw Error(ErrorCode::kInvalidArgument,
                  "token id " + std::to_string(id) + " has no byte form");
    }
    out.push_back(static_cast<char>(id));
  }
  return out;
}

}  // namespace sdcc
