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

#include "sdcc/container.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "gtest/gtest.h"
#include "sdcc/error.h"
#include "test_util.h"

namespace sdcc {
namespace {

using ::sdcc::testing::Gen;
using ::sdcc::testing::TempDir;

CompressedRepresentation RatioRep(Gen& gen) {
  CompressedRepresentation rep;
  rep.backbone = Backbone::kMeanPooling;
  rep.plan.mode = PlanMode::kRatio;
  rep.plan.y_hat = gen.Real(-1, 5);
  rep.plan.scale = gen.Real(-2, 4);
  rep.plan.y_scaled = rep.plan.y_hat + rep.plan.scale;
  rep.plan.r_hat = std::exp2(rep.plan.y_scaled);
  rep.plan.r_target = 8.0;
  rep.plan.window = 8;
  rep.plan.context_length = gen.Size(1, 2000);
  rep.plan.randomized = gen.Bool();
  // Values representable in float32, so the round trip is exact.
  rep.latents =
      gen.Dense(gen.Size(1, 40), gen.Size(1, 16)).cast<float>().cast<double>();
  return rep;
}

CompressedRepresentation LengthRep(Gen& gen) {
  CompressedRepresentation rep = RatioRep(gen);
  rep.backbone =
      gen.Bool() ? Backbone::kLastTokens : Backbone::kCompressionTokens;
  rep.plan.mode = PlanMode::kLength;
  rep.plan.r_target.reset();
  rep.plan.window.reset();
  rep.plan.m_target = static_cast<std::size_t>(rep.latents.rows());
  rep.plan.randomized = false;
  return rep;
}

void ExpectSame(const CompressedRepresentation& a,
                const CompressedRepresentation& b) {
  EXPECT_EQ(a.backbone, b.backbone);
  EXPECT_EQ(a.plan, b.plan);
  EXPECT_EQ(a.latents, b.latents);
}

TEST(ContainerTest, RoundTripIsExact) {
  Gen gen(1);
  for (int i = 0; i < 200; ++i) {
    const CompressedRepresentation rep = i % 2 ? RatioRep(gen) : LengthRep(gen);
    const std::vector<std::uint8_t> bytes = SerializeRepresentation(rep);
    ASSERT_EQ(bytes.size(), kContainerHeaderSize + 4 * static_cast<std::size_t>(
                                                           rep.latents.size()));
    std::size_t consumed = 0;
    ExpectSame(DeserializeRepresentation(bytes, &consumed), rep);
    EXPECT_EQ(consumed, bytes.size());
  }
}

TEST(ContainerTest, HeaderLayout) {
  Gen gen(2);
  CompressedRepresentation rep = RatioRep(gen);
  rep.latents = Matrix::Constant(3, 2, 1.5);
  const std::vector<std::uint8_t> bytes = SerializeRepresentation(rep);
  EXPECT_EQ(std::memcmp(bytes.data(), "SDCCREP\0", 8), 0);
  const auto u64 = [&](std::size_t off) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
      v = (v << 8) | bytes[off + static_cast<std::size_t>(i)];
    return v;
  };
  EXPECT_EQ(u64(8), kContainerVersion);
  EXPECT_EQ(u64(16), 3u);
  EXPECT_EQ(u64(24), 2u);
  EXPECT_EQ(u64(32), 0u);
  EXPECT_EQ(u64(40), 2u);
  EXPECT_EQ(u64(48), rep.plan.context_length);
  EXPECT_EQ(u64(96), 8u);
  EXPECT_EQ(u64(104), 0u);
  EXPECT_EQ(u64(112), rep.plan.randomized ? 1u : 0u);
  // 1.5f = 0x3FC00000, little-endian.
  EXPECT_EQ(bytes[120], 0x00);
  EXPECT_EQ(bytes[122], 0xC0);
  EXPECT_EQ(bytes[123], 0x3F);
}

TEST(ContainerTest, RejectsCorruptInput) {
  Gen gen(3);
  const std::vector<std::uint8_t> bytes =
      SerializeRepresentation(RatioRep(gen));
  for (std::size_t cut :
       {std::size_t{0}, std::size_t{7}, std::size_t{119}, bytes.size() - 1}) {
    EXPECT_THROW(DeserializeRepresentation(std::span(bytes).first(cut)), Error);
  }
  std::vector<std::uint8_t> bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(DeserializeRepresentation(bad_magic), Error);
  std::vector<std::uint8_t> bad_version = bytes;
  bad_version[8] = 9;
  EXPECT_THROW(DeserializeRepresentation(bad_version), Error);
  std::vector<std::uint8_t> bad_mode = bytes;
  bad_mode[32] = 7;
  EXPECT_THROW(DeserializeRepresentation(bad_mode), Error);
}

TEST(ContainerTest, StreamHoldsSeveralRecords) {
  Gen gen(4);
  std::vector<CompressedRepresentation> reps;
  std::stringstream stream;
  for (int i = 0; i < 5; ++i) {
    reps.push_back(i % 2 ? RatioRep(gen) : LengthRep(gen));
    WriteRepresentation(stream, reps.back());
  }
  for (const auto& rep : reps) {
    const auto read = ReadRepresentation(stream);
    ASSERT_TRUE(read.has_value());
    ExpectSame(*read, rep);
  }
  EXPECT_FALSE(ReadRepresentation(stream).has_value());
}

TEST(ContainerTest, TruncatedStreamThrows) {
  Gen gen(5);
  const std::vector<std::uint8_t> bytes =
      SerializeRepresentation(RatioRep(gen));
  std::stringstream stream(std::string(bytes.begin(), bytes.end() - 3));
  EXPECT_THROW(ReadRepresentation(stream), Error);
}

TEST(ContainerTest, FileReaderReturnsAllRecords) {
  Gen gen(6);
  TempDir dir;
  const auto path = dir / "reps.bin";
  std::vector<CompressedRepresentation> reps;
  {
    std::ofstream out(path, std::ios::binary);
    for (int i = 0; i < 3; ++i) {
      reps.push_back(RatioRep(gen));
      WriteRepresentation(out, reps.back());
    }
  }
  const auto read = ReadRepresentationFile(path);
  ASSERT_EQ(read.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) ExpectSame(read[i], reps[i]);
  EXPECT_THROW(ReadRepresentationFile(dir / "missing.bin"), Error);
}

}  // namespace
}  // namespace sdcc
