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

#include "sdcc/sampling.h"

#include <algorithm>
#include <numeric>

#include "sdcc/error.h"
#include "sdcc/random.h"

namespace sdcc {

SampleResult FilterAndSample(std::span<const QARecord> records,
                             const Tokenizer& tokenizer, std::size_t max_tokens,
                             std::size_t n, std::uint64_t seed) {
  if (max_tokens < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_tokens must be >= 1");
  }
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (tokenizer.Tokenize(records[i].context).size() <= max_tokens) {
      survivors.push_back(i);
    }
  }

  SampleResult result;
  result.survivors = survivors.size();
  result.short_of_request = n > survivors.size();
  result.tokenizer_id = std::string(tokenizer.id());

  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  const std::size_t k = std::min(n, survivors.size());
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.UniformIndex(survivors.size() - i);
    std::swap(survivors[i], survivors[j]);
  }
  survivors.resize(k);
  std::sort(survivors.begin(), survivors.end());

  result.records.reserve(k);
  for (std::size_t idx : survivors) {
    result.records.push_back(records[idx]);
    result.records.back().metadata["tokenizer"] = result.tokenizer_id;
  }
  return result;
}

}  // namespace sdcc
