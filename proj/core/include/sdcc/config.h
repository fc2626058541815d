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

#ifndef SDCC_CONFIG_H_
#define SDCC_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "sdcc/bridge_client.h"
#include "sdcc/drs.h"
#include "sdcc/encoder.h"
#include "sdcc/synthesis.h"

namespace sdcc {

// Toolkit settings, read from a YAML document. Every key is optional:
//
//   encoder:   {hidden_size, layers, attention: causal|bidirectional,
//               mix_window, seed}
//   drs:       {ratios: [2, 4, 8, 16, 32], lengths: [16, 32, 64, 128]}
//   projector: {intermediate_size, output_size, seed}
//   loss:      {lambda}
//   training:  {ratio_randomization, seed}
//   sampling:  {seed}
//   teacher:   {base_url, model, auth_token_env, max_retries, timeout_s,
//               max_concurrent, temperature, initial_backoff_s}
//   bridge:    {base_url, timeout_s}
//
// Other top-level mappings with the teacher keys may hold alternative
// endpoints, selected by section name.
struct ToolkitConfig {
  EncoderConfig encoder;
  RatioCandidates ratios = RatioCandidates::Default();
  LengthCandidates lengths = LengthCandidates::Default();
  std::size_t projector_intermediate = 64;
  std::size_t projector_output = 32;
  std::uint64_t projector_seed = 1;
  double lambda = 1.0;
  bool ratio_randomization = false;
  std::uint64_t training_seed = 0;
  std::uint64_t sampling_seed = 0;
  TeacherEndpoint teacher;
  std::optional<BridgeConfig> bridge;
};

ToolkitConfig ParseConfig(std::string_view yaml_text);
ToolkitConfig LoadConfig(const std::filesystem::path& path);

// Reads a teacher endpoint from `section` of a config file. The spec is
// "path" or "path#section"; the section defaults to "teacher".
TeacherEndpoint LoadEndpoint(std::string_view spec);

}  // namespace sdcc

#endif  // SDCC_CONFIG_H_
