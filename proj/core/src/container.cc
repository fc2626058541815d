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

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "sdcc/error.h"

namespace sdcc {
namespace {

constexpr std::uint8_t kMagic[8] = {'S', 'D', 'C', 'C', 'R', 'E', 'P', 0};

void PutU64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutF64(std::vector<std::uint8_t>& out, double v) {
  PutU64(out, std::bit_cast<std::uint64_t>(v));
}

void PutF32(std::vector<std::uint8_t>& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint64_t GetU64(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(in[offset + i]) << (8 * i);
  return v;
}

double GetF64(std::span<const std::uint8_t> in, std::size_t offset) {
  return std::bit_cast<double>(GetU64(in, offset));
}

float GetF32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
  return std::bit_cast<float>(v);
}

std::uint64_t BackboneCode(Backbone b) {
  switch (b) {
    case Backbone::kLastTokens:
      return 0;
    case Backbone::kCompressionTokens:
      return 1;
    case Backbone::kMeanPooling:
      return 2;
  }
  return 2;
}

Backbone BackboneFromCode(std::uint64_t code) {
  switch (code) {
    case 0:
      return Backbone::kLastTokens;
    case 1:
      return Backbone::kCompressionTokens;
    case 2:
      return Backbone::kMeanPooling;
  }
  throw Error(ErrorCode::kSchema,
              "unknown backbone code " + std::to_string(code));
}

std::uint64_t PayloadBytes(std::uint64_t m, std::uint64_t d) {
  if (d != 0 && m > std::numeric_limits<std::uint64_t>::max() / d / 4) {
    throw Error(ErrorCode::kSchema, "latent dimensions overflow");
  }
  return m * d * 4;
}

}  // namespace

std::vector<std::uint8_t> SerializeRepresentation(
    const CompressedRepresentation& rep) {
  const CompressionPlan& plan = rep.plan;
  const auto m = static_cast<std::uint64_t>(rep.latents.rows());
  const auto d = static_cast<std::uint64_t>(rep.latents.cols());
  std::vector<std::uint8_t> out;
  out.reserve(kContainerHeaderSize + PayloadBytes(m, d));
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  PutU64(out, kContainerVersion);
  PutU64(out, m);
  PutU64(out, d);
  PutU64(out, plan.mode == PlanMode::kRatio ? 0 : 1);
  PutU64(out, BackboneCode(rep.backbone));
  PutU64(out, plan.context_length);
  PutF64(out, plan.y_hat);
  PutF64(out, plan.scale);
  PutF64(out, plan.y_scaled);
  PutF64(out, plan.r_hat);
  PutF64(out, plan.r_target.value_or(std::numeric_limits<double>::quiet_NaN()));
  PutU64(out, plan.window.value_or(0));
  PutU64(out, plan.m_target.value_or(0));
  PutU64(out, plan.randomized ? 1 : 0);
  for (Eigen::Index i = 0; i < rep.latents.rows(); ++i) {
    for (Eigen::Index j = 0; j < rep.latents.cols(); ++j) {
      PutF32(out, static_cast<float>(rep.latents(i, j)));
    }
  }
  return out;
}

CompressedRepresentation DeserializeRepresentation(
    std::span<const std::uint8_t> bytes, std::size_t* consumed) {
  if (bytes.size() < kContainerHeaderSize) {
    throw Error(ErrorCode::kSchema, "truncated container header");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::kSchema, "bad container magic");
  }
  const std::uint64_t version = GetU64(bytes, 8);
  if (version != kContainerVersion) {
    throw Error(ErrorCode::kSchema,
                "unsupported container version " + std::to_string(version));
  }
  const std::uint64_t m = GetU64(bytes, 16);
  const std::uint64_t d = GetU64(bytes, 24);
  const std::uint64_t payload = PayloadBytes(m, d);
  if (bytes.size() - kContainerHeaderSize < payload) {
    throw Error(ErrorCode::kSchema, "truncated container payload");
  }

  CompressedRepresentation rep;
  CompressionPlan& plan = rep.plan;
  const std::uint64_t mode = GetU64(bytes, 32);
  if (mode > 1) throw Error(ErrorCode::kSchema, "unknown plan mode code");
  plan.mode = mode == 0 ? PlanMode::kRatio : PlanMode::kLength;
  rep.backbone = BackboneFromCode(GetU64(bytes, 40));
  plan.context_length = GetU64(bytes, 48);
  plan.y_hat = GetF64(bytes, 56);
  plan.scale = GetF64(bytes, 64);
  plan.y_scaled = GetF64(bytes, 72);
  plan.r_hat = GetF64(bytes, 80);
  const double r_target = GetF64(bytes, 88);
  if (!std::isnan(r_target)) plan.r_target = r_target;
  if (const std::uint64_t s = GetU64(bytes, 96); s != 0) plan.window = s;
  if (const std::uint64_t mt = GetU64(bytes, 104); mt != 0) plan.m_target = mt;
  plan.randomized = (GetU64(bytes, 112) & 1) != 0;

  rep.latents.resize(static_cast<Eigen::Index>(m),
                     static_cast<Eigen::Index>(d));
  std::size_t offset = kContainerHeaderSize;
  for (Eigen::Index i = 0; i < rep.latents.rows(); ++i) {
    for (Eigen::Index j = 0; j < rep.latents.cols(); ++j) {
      rep.latents(i, j) = GetF32(bytes, offset);
      offset += 4;
    }
  }
  if (consumed) *consumed = offset;
  return rep;
}

void WriteRepresentation(std::ostream& out,
                         const CompressedRepresentation& rep) {
  const std::vector<std::uint8_t> bytes = SerializeRepresentation(rep);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "container write failed");
}

std::optional<CompressedRepresentation> ReadRepresentation(std::istream& in) {
  std::vector<std::uint8_t> header(kContainerHeaderSize);
  in.read(reinterpret_cast<char*>(header.data()),
          static_cast<std::streamsize>(header.size()));
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got == 0) return std::nullopt;
  if (got < kContainerHeaderSize) {
    throw Error(ErrorCode::kSchema, "truncated container header");
  }
  const std::uint64_t payload =
      PayloadBytes(GetU64(header, 16), GetU64(header, 24));
  header.resize(kContainerHeaderSize + payload);
  in.read(reinterpret_cast<char*>(header.data() + kContainerHeaderSize),
          static_cast<std::streamsize>(payload));
  if (static_cast<std::uint64_t>(in.gcount()) != payload) {
    throw Error(ErrorCode::kSchema, "truncated container payload");
  }
  return DeserializeRepresentation(header);
}

std::vector<CompressedRepresentation> ReadRepresentationFile(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::vector<CompressedRepresentation> reps;
  while (auto rep = ReadRepresentation(in)) reps.push_back(std::move(*rep));
  return reps;
}

}  // namespace sdcc
