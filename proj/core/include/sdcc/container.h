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

// Binary container for CompressedRepresentation. All fields little-endian.
//
//   offset  type  field
//        0  u8[8] magic "SDCCREP" followed by 0x00
//        8  u64   version (1)
//       16  u64   M (latent rows)
//       24  u64   d_dec (latent width)
//       32  u64   mode (0 ratio, 1 length)
//       40  u64   backbone (0 last_tokens, 1 compression_tokens, 2
//       mean_pooling) 48  u64   L_ctx 56  f64   y_hat 64  f64   scale 72  f64
//       y_scaled 80  f64   r_hat 88  f64   r_target (NaN when absent) 96  u64
//       S (0 when absent)
//      104  u64   M_target (0 when absent)
//      112  u64   flags (bit 0: randomized)
//      120  f32[M * d_dec] latents, row-major
//
// Records are self-delimiting, so a file may hold several back to back.
// Latents are cast to float32; everything else is exact.

#ifndef SDCC_CONTAINER_H_
#define SDCC_CONTAINER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "sdcc/pipeline.h"

namespace sdcc {

inline constexpr std::size_t kContainerHeaderSize = 120;
inline constexpr std::uint64_t kContainerVersion = 1;

std::vector<std::uint8_t> SerializeRepresentation(
    const CompressedRepresentation& rep);

// Parses one record from the front of `bytes`; sets *consumed to its size.
CompressedRepresentation DeserializeRepresentation(
    std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr);

void WriteRepresentation(std::ostream& out,
                         const CompressedRepresentation& rep);
// Returns nullopt at a clean end of stream; throws kSchema on truncation.
std::optional<CompressedRepresentation> ReadRepresentation(std::istream& in);

std::vector<CompressedRepresentation> ReadRepresentationFile(
    const std::filesystem::path& path);

}  // namespace sdcc

#endif  // SDCC_CONTAINER_H_
