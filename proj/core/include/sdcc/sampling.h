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

#ifndef SDCC_SAMPLING_H_
#define SDCC_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdcc/records.h"
#include "sdcc/tokenizer.h"

namespace sdcc {

struct SampleResult {
  std::vector<QARecord> records;
  std::size_t survivors = 0;
  // Set when fewer than the requested number of records survived the filter.
  bool short_of_request = false;
  std::string tokenizer_id;
};

// Keeps records whose tokenized context has at most max_tokens tokens, then
// draws min(n, survivors) of them uniformly without replacement. Selected
// records keep their input order and gain metadata["tokenizer"]. Pure in
// (records, max_tokens, n, seed).
SampleResult FilterAndSample(std::span<const QARecord> records,
                             const Tokenizer& tokenizer, std::size_t max_tokens,
                             std::size_t n, std::uint64_t seed);

}  // namespace sdcc

#endif  // SDCC_SAMPLING_H_
