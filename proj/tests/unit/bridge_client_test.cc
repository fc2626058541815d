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

#include "sdcc/bridge_client.h"

#include <functional>
#include <memory>
#include <string>

#include "gtest/gtest.h"
#include "sdcc/error.h"
#include "sdcc/pipeline.h"
#include "stub_bridge.h"
#include "test_util.h"

namespace sdcc {
namespace {

using ::sdcc::testing::Gen;
using ::sdcc::testing::StubBridge;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(Base64CodecTest, RoundTripIsBitIdenticalForFloat32) {
  Gen gen(1);
  for (int i = 0; i < 100; ++i) {
    const std::size_t rows = gen.Size(0, 20), cols = gen.Size(1, 12);
    const Matrix m =
        gen.Dense(rows, cols, -1e3, 1e3).cast<float>().cast<double>();
    const Matrix back = DecodeMatrixBase64(EncodeMatrixBase64(m), rows, cols);
    ASSERT_EQ(back, m);
  }
}

TEST(Base64CodecTest, KnownEncoding) {
  Matrix m(1, 2);
  m << 1.0, -2.0;  // 0x3F800000, 0xC0000000 little-endian
  EXPECT_EQ(EncodeMatrixBase64(m), "AACAPwAAAMA=");
}

TEST(Base64CodecTest, RejectsBadPayloads) {
  EXPECT_EQ(CodeOf([] { DecodeMatrixBase64("AACAPwAAAMA=", 1, 3); }),
            ErrorCode::kShape);
  EXPECT_EQ(CodeOf([] { DecodeMatrixBase64("!!not base64!!", 1, 1); }),
            ErrorCode::kProtocol);
}

class BridgeTest : public ::testing::Test {
 protected:
  BridgeClient Client() const {
    return BridgeClient(stub_.config(), std::make_shared<HttplibTransport>());
  }
  StubBridge stub_{8};
};

TEST_F(BridgeTest, HealthReportsCapabilities) {
  const BridgeHealth h = Client().Health();
  EXPECT_EQ(h.model, "stub");
  EXPECT_EQ(h.hidden_size, 8u);
  EXPECT_TRUE(h.can_generate);
}

TEST_F(BridgeTest, RemoteEncoderMatchesTheLocalModel) {
  Gen gen(2);
  const RemoteEncoder remote(Client(), AttentionMode::kCausal);
  EXPECT_EQ(remote.hidden_size(), 8u);
  EncoderConfig config;
  config.hidden_size = 8;
  config.attention = AttentionMode::kCausal;
  const ToyEncoder local(config);
  TokenSequence ctx;
  for (int i = 0; i < 50; ++i)
    ctx.tokens.push_back(static_cast<TokenId>(gen.Size(0, 255)));
  const TokenSequence prepared = PrepareEncoderInput(ctx);
  const HiddenMatrix h = remote.Encode(prepared, 3);
  EXPECT_EQ(h.rows(), 54u);
  EXPECT_EQ(h.content_rows(), 50u);
  EXPECT_EQ(h.slot_rows(), 3u);
  EXPECT_EQ(h.data,
            local.Encode(prepared, 3).data.cast<float>().cast<double>());
}

TEST_F(BridgeTest, RemoteEncoderIsCausalOverTheWire) {
  Gen gen(3);
  const RemoteEncoder remote(Client(), AttentionMode::kCausal);
  TokenSequence seq;
  for (int i = 0; i < 40; ++i)
    seq.tokens.push_back(static_cast<TokenId>(gen.Size(0, 255)));
  const HiddenMatrix full = remote.Encode(PrepareEncoderInput(seq), 0);
  TokenSequence prefix{{seq.tokens.begin(), seq.tokens.begin() + 25}};
  const HiddenMatrix part = remote.Encode(PrepareEncoderInput(prefix), 0);
  EXPECT_EQ(part.data.topRows(25), full.data.topRows(25));
}

TEST_F(BridgeTest, DrivesASinglePassCompressor) {
  Gen gen(4);
  const RemoteEncoder remote(Client(), AttentionMode::kCausal);
  RegressionHead head = RegressionHead::Zeros(8);
  head.bias = 2.0;
  const Compressor c(remote, head, Projector::Init(8, 8, 4, 1));
  TokenSequence ctx;
  for (int i = 0; i < 256; ++i)
    ctx.tokens.push_back(static_cast<TokenId>(gen.Size(0, 255)));
  stub_.encode_calls = 0;
  const auto rep =
      c.Compress(ctx, 0.0, Backbone::kCompressionTokens, PlanMode::kLength);
  EXPECT_EQ(stub_.encode_calls.load(), 1);
  EXPECT_EQ(rep.latents.rows(), 64);
}

TEST_F(BridgeTest, ShapeMismatchIsDetected) {
  const RemoteEncoder remote(Client(), AttentionMode::kBidirectional);
  stub_.bad_shape = true;
  EXPECT_EQ(
      CodeOf([&] { remote.Encode(TokenSequence{{1, 2, 3, kSentinelId}}, 0); }),
      ErrorCode::kShape);
}

TEST_F(BridgeTest, LmLossAndGenerate) {
  const BridgeClient client = Client();
  EXPECT_EQ(client.LmLoss(TokenSequence{{1, 2}}, "abcd"), 2.0);
  CompressedRepresentation rep;
  rep.latents = Matrix::Constant(3, 4, 0.5);
  const DecoderInput in =
      BuildDecoderInput(TokenSequence{{kPlaceholderId, 7}}, rep);
  EXPECT_EQ(RemoteAnswerer(client).Answer(QARecord{}, in),
            "span=3 sum=6.000000");
}

TEST_F(BridgeTest, ErrorRepliesBecomeTransportErrors) {
  DecoderInput bad;
  bad.tokens = TokenSequence{{kLatentSlotId, kLatentSlotId}};
  bad.span_length = 2;
  bad.override_embeddings = Matrix::Zero(1, 4);
  try {
    Client().Generate(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransport);
    EXPECT_NE(std::string(e.what()).find("span mismatch"), std::string::npos);
  }
}

TEST(BridgeDownTest, UnreachableServerIsATransportError) {
  BridgeConfig config;
  config.base_url = "http://127.0.0.1:1";
  config.timeout_s = 2.0;
  const BridgeClient client(config, std::make_shared<HttplibTransport>());
  EXPECT_EQ(CodeOf([&] { client.Health(); }), ErrorCode::kTransport);
  EXPECT_EQ(CodeOf([&] { RemoteEncoder(client, AttentionMode::kCausal); }),
            ErrorCode::kTransport);
}

}  // namespace
}  // namespace sdcc
