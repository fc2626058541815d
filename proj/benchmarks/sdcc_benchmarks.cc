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

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "sdcc/backbones.h"
#include "sdcc/drs.h"
#include "sdcc/encoder.h"
#include "sdcc/pipeline.h"
#include "sdcc/tokenizer.h"

namespace sdcc {
namespace {

TokenSequence RandomContext(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TokenSequence seq;
  for (std::size_t i = 0; i < n; ++i)
    seq.tokens.push_back(static_cast<TokenId>(rng() % 256));
  return seq;
}

void BM_SelectPlan(benchmark::State& state) {
  const RatioCandidates ratios = RatioCandidates::Default();
  const LengthCandidates lengths = LengthCandidates::Default();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dist(-4.0, 9.0);
  std::vector<double> ys(1024);
  for (double& y : ys) y = dist(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(SelectPlan(ys[i++ & 1023], 0.5, PlanMode::kRatio,
                                        1024, ratios, lengths));
  }
}
BENCHMARK(BM_SelectPlan);

void BM_MeanPool(benchmark::State& state) {
  const std::size_t l = static_cast<std::size_t>(state.range(0));
  HiddenMatrix h;
  h.data = Matrix::Random(static_cast<Eigen::Index>(l + 1), 64);
  h.roles.assign(l + 1, PositionRole::kContent);
  h.roles.back() = PositionRole::kSentinel;
  for (auto _ : state) benchmark::DoNotOptimize(MeanPool(h, 4));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(l));
}
BENCHMARK(BM_MeanPool)->Arg(128)->Arg(1024)->Arg(8192);

void BM_ToyEncode(benchmark::State& state) {
  EncoderConfig config;
  config.hidden_size = 64;
  config.attention = AttentionMode::kCausal;
  const ToyEncoder encoder(config);
  const TokenSequence prepared = PrepareEncoderInput(
      RandomContext(static_cast<std::size_t>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(encoder.Encode(prepared, 0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ToyEncode)->Arg(128)->Arg(1024);

void BM_Compress(benchmark::State& state) {
  EncoderConfig config;
  config.hidden_size = 64;
  config.attention = AttentionMode::kCausal;
  const ToyEncoder encoder(config);
  RegressionHead head = RegressionHead::Zeros(64);
  head.bias = 2.0;
  const Compressor compressor(encoder, head, Projector::Init(64, 128, 64, 3));
  const TokenSequence ctx =
      RandomContext(static_cast<std::size_t>(state.range(0)), 3);
  const Backbone backbone = state.range(1) == 0 ? Backbone::kMeanPooling
                                                : Backbone::kCompressionTokens;
  const PlanMode mode =
      state.range(1) == 0 ? PlanMode::kRatio : PlanMode::kLength;
  for (auto _ : state)
    benchmark::DoNotOptimize(compressor.Compress(ctx, 0.0, backbone, mode));
}
BENCHMARK(BM_Compress)->Args({1024, 0})->Args({1024, 1});

}  // namespace
}  // namespace sdcc

BENCHMARK_MAIN();
