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

#include "sdcc/pipeline.h"

#include <cmath>
#include <set>
#include <thread>
#include <vector>

#include "counting_encoder.h"
#include "gtest/gtest.h"
#include "sdcc/error.h"
#include "sdcc/tokenizer.h"
#include "test_util.h"

namespace sdcc {
namespace {

using ::sdcc::testing::CountingEncoder;
using ::sdcc::testing::Gen;

TokenSequence RandomContext(Gen& gen, std::size_t n) {
  TokenSequence seq;
  for (std::size_t i = 0; i < n; ++i) {
    seq.tokens.push_back(static_cast<TokenId>(gen.Size(0, 255)));
  }
  return seq;
}

// Triple-loop reference for the projector.
Matrix NaiveProject(const Matrix& x, const Projector& p) {
  const auto silu = [](double v) { return v / (1.0 + std::exp(-v)); };
  Matrix h(x.rows(), p.w1.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.w1.cols(); ++j) {
      double s = p.b1[j];
      for (Eigen::Index k = 0; k < x.cols(); ++k) s += x(i, k) * p.w1(k, j);
      h(i, j) = p.activation == Activation::kSilu ? silu(s) : s;
    }
  }
  Matrix out(x.rows(), p.w2.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.w2.cols(); ++j) {
      double s = p.b2[j];
      for (Eigen::Index k = 0; k < h.cols(); ++k) s += h(i, k) * p.w2(k, j);
      out(i, j) = s;
    }
  }
  return out;
}

ExtractedFeatures Features(Matrix data) {
  ExtractedFeatures f;
  f.data = std::move(data);
  f.source_length = static_cast<std::size_t>(f.data.rows());
  return f;
}

TEST(ProjectTest, ZeroProjectorAnnihilates) {
  Gen gen(1);
  const Matrix out =
      Project(Features(gen.Dense(5, 4)), Projector::Zeros(4, 7, 3));
  EXPECT_EQ(out.rows(), 5);
  EXPECT_EQ(out.cols(), 3);
  EXPECT_TRUE(out.isZero(0.0));
}

TEST(ProjectTest, IdentityLayersPassThrough) {
  Gen gen(2);
  Projector p = Projector::Zeros(6, 6, 6);
  p.w1.setIdentity();
  p.w2.setIdentity();
  p.activation = Activation::kIdentity;
  const Matrix x = gen.Dense(4, 6);
  EXPECT_EQ(Project(Features(x), p), x);
}

TEST(ProjectTest, MatchesNaiveMatmul) {
  Gen gen(3);
  for (int t = 0; t < 30; ++t) {
    const std::size_t din = gen.Size(1, 12), h = gen.Size(1, 20),
                      dout = gen.Size(1, 9);
    Projector p = Projector::Init(din, h, dout, gen.Size(0, 1000));
    p.b1 = gen.Dense(h, 1);
    p.b2 = gen.Dense(dout, 1);
    const Matrix x = gen.Dense(gen.Size(1, 10), din);
    EXPECT_LT(
        (Project(Features(x), p) - NaiveProject(x, p)).cwiseAbs().maxCoeff(),
        1e-6);
  }
}

TEST(ProjectTest, WidthMismatchIsAnError) {
  Gen gen(4);
  EXPECT_THROW(Project(Features(gen.Dense(3, 5)), Projector::Zeros(4, 2, 2)),
               Error);
}

TEST(ProjectorTest, InitIsSeededAndBounded) {
  const Projector a = Projector::Init(16, 64, 32, 9);
  const Projector b = Projector::Init(16, 64, 32, 9);
  EXPECT_EQ(a.w1, b.w1);
  EXPECT_EQ(a.w2, b.w2);
  EXPECT_LE(a.w1.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 80.0));
  EXPECT_NE(Projector::Init(16, 64, 32, 10).w1, a.w1);
}

TEST(ExpandPlaceholderTest, ReplacesThePlaceholder) {
  const TokenSequence prompt{{1, kPlaceholderId, 2}};
  const DecoderInput in = ExpandPlaceholder(prompt, 3);
  EXPECT_EQ(in.tokens.tokens,
            (std::vector<TokenId>{1, kLatentSlotId, kLatentSlotId,
                                  kLatentSlotId, 2}));
  EXPECT_EQ(in.span_start, 1u);
  EXPECT_EQ(in.span_length, 3u);
}

TEST(ExpandPlaceholderTest, SingleSlotKeepsLength) {
  const TokenSequence prompt{{kPlaceholderId, 5, 6}};
  const DecoderInput in = ExpandPlaceholder(prompt, 1);
  EXPECT_EQ(in.tokens.size(), 3u);
  EXPECT_EQ(in.span_start, 0u);
  EXPECT_EQ(in.span_length, 1u);
}

TEST(ExpandPlaceholderTest, RequiresExactlyOnePlaceholder) {
  EXPECT_THROW(ExpandPlaceholder(TokenSequence{{1, 2}}, 2), Error);
  EXPECT_THROW(
      ExpandPlaceholder(TokenSequence{{kPlaceholderId, 1, kPlaceholderId}}, 2),
      Error);
  EXPECT_THROW(ExpandPlaceholder(TokenSequence{{kPlaceholderId}}, 0), Error);
}

TEST(BuildDecoderInputTest, AttachesLatentsAndKeepsOtherTokens) {
  Gen gen(5);
  ByteTokenizer tok;
  TokenSequence prompt = tok.Tokenize("abcdefghi");
  prompt.tokens.insert(prompt.tokens.begin() + 4, kPlaceholderId);  // 10 tokens
  CompressedRepresentation rep;
  rep.latents = gen.Dense(256, 6);
  const DecoderInput in = BuildDecoderInput(prompt, rep);
  EXPECT_EQ(in.tokens.size(), 265u);
  EXPECT_EQ(in.span_length, 256u);
  EXPECT_EQ(in.override_embeddings, rep.latents);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(in.tokens[i], prompt[i]);
  for (std::size_t i = 4; i < 260; ++i) EXPECT_EQ(in.tokens[i], kLatentSlotId);
  for (std::size_t i = 260; i < 265; ++i)
    EXPECT_EQ(in.tokens[i], prompt[i - 255]);
  EXPECT_THROW(BuildDecoderInput(prompt, rep, 8), Error);
  EXPECT_NO_THROW(BuildDecoderInput(prompt, rep, 6));
}

TEST(MakeQuestionPromptTest, LeadsWithPlaceholder) {
  ByteTokenizer tok;
  const TokenSequence p = MakeQuestionPrompt(tok, "Who?");
  EXPECT_EQ(p[0], kPlaceholderId);
  TokenSequence rest{{p.tokens.begin() + 1, p.tokens.end()}};
  EXPECT_EQ(tok.Detokenize(rest), "\nQuestion: Who?\nAnswer:");
}

TEST(CheckPairingTest, EnforcesTheDuality) {
  EXPECT_NO_THROW(CheckPairing(Backbone::kMeanPooling, PlanMode::kRatio));
  EXPECT_NO_THROW(CheckPairing(Backbone::kLastTokens, PlanMode::kLength));
  EXPECT_NO_THROW(
      CheckPairing(Backbone::kCompressionTokens, PlanMode::kLength));
  EXPECT_THROW(CheckPairing(Backbone::kMeanPooling, PlanMode::kLength), Error);
  EXPECT_THROW(CheckPairing(Backbone::kLastTokens, PlanMode::kRatio), Error);
}

TEST(RatioRandomizerTest, SeededDrawsFromTheSet) {
  const RatioCandidates r = RatioCandidates::Default();
  RatioRandomizer a(r, 5), b(r, 5);
  std::set<double> seen;
  for (int i = 0; i < 500; ++i) {
    const double x = a.Next();
    ASSERT_EQ(x, b.Next());
    ASSERT_TRUE(r.Contains(x));
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 5u);
}

class CompressorTest : public ::testing::Test {
 protected:
  static EncoderConfig Config(AttentionMode mode) {
    EncoderConfig c;
    c.hidden_size = 8;
    c.attention = mode;
    return c;
  }

  // Head with only a bias, so y_hat is known exactly.
  static RegressionHead BiasHead(double bias) {
    RegressionHead h = RegressionHead::Zeros(8);
    h.bias = bias;
    return h;
  }
};

TEST_F(CompressorTest, MeanPoolingShapes) {
  Gen gen(6);
  const ToyEncoder enc(Config(AttentionMode::kBidirectional));
  const Compressor c(enc, BiasHead(2.0), Projector::Init(8, 16, 5, 1));
  const TokenSequence ctx = RandomContext(gen, 1024);
  const CompressedRepresentation a =
      c.Compress(ctx, 0.0, Backbone::kMeanPooling, PlanMode::kRatio);
  EXPECT_EQ(a.plan.window, 4u);
  EXPECT_EQ(a.latents.rows(), 256);
  EXPECT_EQ(a.latents.cols(), 5);
  const CompressedRepresentation b =
      c.Compress(ctx, 10.0, Backbone::kMeanPooling, PlanMode::kRatio);
  EXPECT_EQ(b.plan.r_target, 32.0);
  EXPECT_EQ(b.latents.rows(), 32);
}

TEST_F(CompressorTest, UsesTheSentinelPrediction) {
  Gen gen(7);
  const ToyEncoder enc(Config(AttentionMode::kBidirectional));
  RegressionHead head{gen.Dense(8, 1), 0.5};
  const Compressor c(enc, head, Projector::Init(8, 4, 4, 1));
  const TokenSequence ctx = RandomContext(gen, 300);
  const double expected =
      PredictDensity(LastHidden(enc.Encode(PrepareEncoderInput(ctx), 0)), head);
  EXPECT_EQ(
      c.Compress(ctx, 0.0, Backbone::kMeanPooling, PlanMode::kRatio).plan.y_hat,
      expected);
}

TEST_F(CompressorTest, EncodesExactlyOncePerCall) {
  Gen gen(8);
  const ToyEncoder toy(Config(AttentionMode::kCausal));
  CountingEncoder enc(toy);
  const Compressor c(enc, BiasHead(2.5), Projector::Init(8, 8, 8, 2));
  const Backbone backbones[] = {Backbone::kMeanPooling, Backbone::kLastTokens,
                                Backbone::kCompressionTokens};
  for (int i = 0; i < 60; ++i) {
    const Backbone b = backbones[i % 3];
    const PlanMode m =
        b == Backbone::kMeanPooling ? PlanMode::kRatio : PlanMode::kLength;
    enc.Reset();
    c.Compress(RandomContext(gen, gen.Size(128, 600)), gen.Real(-3, 3), b, m);
    ASSERT_EQ(enc.calls(), 1u);
  }
}

TEST_F(CompressorTest, CompressionTokensMatchDedicatedEncoding) {
  Gen gen(9);
  const ToyEncoder enc(Config(AttentionMode::kCausal));
  const Compressor c(enc, BiasHead(3.0), Projector::Init(8, 8, 8, 2));
  const TokenSequence ctx = RandomContext(gen, 512);
  const CompressedRepresentation rep =
      c.Compress(ctx, 0.0, Backbone::kCompressionTokens, PlanMode::kLength);
  ASSERT_EQ(rep.plan.m_target, 64u);
  // A separate encoding with exactly M slots yields the same latents.
  const HiddenMatrix h = enc.Encode(PrepareEncoderInput(ctx), 64);
  const Matrix expected =
      Project(ExtractCompressionTokens(h, 64), c.projector());
  EXPECT_EQ(rep.latents, expected);
}

TEST_F(CompressorTest, CompressionTokensNeedCausalEncoder) {
  Gen gen(10);
  const ToyEncoder enc(Config(AttentionMode::kBidirectional));
  const Compressor c(enc, BiasHead(3.0), Projector::Init(8, 8, 8, 2));
  EXPECT_THROW(c.Compress(RandomContext(gen, 200), 0.0,
                          Backbone::kCompressionTokens, PlanMode::kLength),
               Error);
}

TEST_F(CompressorTest, LastTokensTakesMTargetRows) {
  Gen gen(11);
  const ToyEncoder enc(Config(AttentionMode::kBidirectional));
  const Compressor c(enc, BiasHead(2.0), Projector::Init(8, 8, 8, 2));
  const CompressedRepresentation rep = c.Compress(
      RandomContext(gen, 512), 0.0, Backbone::kLastTokens, PlanMode::kLength);
  EXPECT_EQ(rep.plan.m_target, 128u);
  EXPECT_EQ(rep.latents.rows(), 128);
}

TEST_F(CompressorTest, RejectsCrossPairingsAndWidthMismatch) {
  Gen gen(12);
  const ToyEncoder enc(Config(AttentionMode::kCausal));
  const Compressor c(enc, BiasHead(2.0), Projector::Init(8, 8, 8, 2));
  EXPECT_THROW(c.Compress(RandomContext(gen, 200), 0.0, Backbone::kMeanPooling,
                          PlanMode::kLength),
               Error);
  EXPECT_THROW(
      Compressor(enc, RegressionHead::Zeros(4), Projector::Init(8, 8, 8, 2)),
      Error);
  EXPECT_THROW(Compressor(enc, BiasHead(0), Projector::Init(6, 8, 8, 2)),
               Error);
}

TEST_F(CompressorTest, ShapeLawAndMonotoneDecoderLength) {
  Gen gen(13);
  ByteTokenizer tok;
  const ToyEncoder enc(Config(AttentionMode::kCausal));
  RegressionHead head{gen.Dense(8, 1, -0.2, 0.2), 2.5};
  const Compressor c(enc, head, Projector::Init(8, 8, 4, 3));
  const TokenSequence prompt = MakeQuestionPrompt(tok, "What is it?");
  for (int t = 0; t < 20; ++t) {
    const TokenSequence ctx = RandomContext(gen, gen.Size(128, 1500));
    const HiddenMatrix h_pool = c.EncodeContext(ctx, Backbone::kMeanPooling);
    const HiddenMatrix h_tok = c.EncodeContext(ctx, Backbone::kLastTokens);
    std::size_t prev_pool = SIZE_MAX, prev_tok = SIZE_MAX;
    for (double scale = -4.0; scale <= 6.0; scale += 0.25) {
      const auto pool = c.CompressEncoded(h_pool, scale, Backbone::kMeanPooling,
                                          PlanMode::kRatio);
      ASSERT_EQ(static_cast<std::size_t>(pool.latents.rows()),
                (ctx.size() + *pool.plan.window - 1) / *pool.plan.window);
      const auto toks = c.CompressEncoded(h_tok, scale, Backbone::kLastTokens,
                                          PlanMode::kLength);
      ASSERT_EQ(static_cast<std::size_t>(toks.latents.rows()),
                *toks.plan.m_target);
      const std::size_t len_pool =
          BuildDecoderInput(prompt, pool).tokens.size();
      const std::size_t len_tok = BuildDecoderInput(prompt, toks).tokens.size();
      ASSERT_LE(len_pool, prev_pool);
      ASSERT_LE(len_tok, prev_tok);
      prev_pool = len_pool;
      prev_tok = len_tok;
    }
  }
}

TEST_F(CompressorTest, ForcedFactorOverridesTheSelection) {
  Gen gen(14);
  const ToyEncoder enc(Config(AttentionMode::kCausal));
  const Compressor c(enc, BiasHead(1.0), Projector::Init(8, 8, 4, 3));
  const auto rep = c.Compress(RandomContext(gen, 256), 0.0,
                              Backbone::kMeanPooling, PlanMode::kRatio, 16.0);
  EXPECT_EQ(rep.plan.r_target, 16.0);
  EXPECT_TRUE(rep.plan.randomized);
  EXPECT_EQ(rep.latents.rows(), 16);
}

TEST_F(CompressorTest, ConcurrentCallsAgreeWithSerialOnes) {
  Gen gen(15);
  const ToyEncoder enc(Config(AttentionMode::kCausal));
  const Compressor c(enc, BiasHead(2.0), Projector::Init(8, 8, 4, 3));
  std::vector<TokenSequence> contexts;
  for (int i = 0; i < 16; ++i)
    contexts.push_back(RandomContext(gen, 300 + 10 * i));
  std::vector<Matrix> serial, parallel(contexts.size());
  for (const auto& ctx : contexts) {
    serial.push_back(
        c.Compress(ctx, 0.5, Backbone::kMeanPooling, PlanMode::kRatio).latents);
  }
  {
    std::vector<std::jthread> threads;
    for (std::size_t i = 0; i < contexts.size(); ++i) {
      threads.emplace_back([&, i] {
        parallel[i] = c.Compress(contexts[i], 0.5, Backbone::kMeanPooling,
                                 PlanMode::kRatio)
                          .latents;
      });
    }
  }
  EXPECT_EQ(serial, parallel);
}

}  // namespace
}  // namespace sdcc
