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

#ifndef SDCC_TOOLS_COMMANDS_H_
#define SDCC_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdcc::cli {

// Options shared by the commands that build a compressor.
struct ModelFlags {
  std::string config;           // YAML toolkit config; empty for defaults
  std::string head;             // head JSON; empty for a zero head
  std::string encoder = "toy";  // toy | bridge
};

struct SampleFlags {
  std::string in;
  std::string out;
  std::size_t max_tokens = 2048;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
};

struct CompressFlags {
  ModelFlags model;
  std::string in;
  std::string out;
  double scale = 0.0;
  std::string backbone = "mean_pooling";
  std::string mode;  // empty: paired default for the backbone
};

struct SweepFlags {
  ModelFlags model;
  std::string eval;
  std::string report;
  std::string scales = "-2..4:0.5";
  std::string backbone = "mean_pooling";
  std::string mode;
  std::string answerer =
      "stub-correct";  // stub-correct | stub-incorrect | bridge
  std::string partial;
  std::string by_source;
  std::size_t threads = 0;
};

struct SynthFlags {
  int phase = 1;
  std::string in;
  std::string out;
  std::string endpoint;
  std::string fixtures;  // playback file; no network when set
  std::string record;    // write live responses here as fixtures
  std::string skips;     // skip manifest, default <out>.skips.jsonl
  std::vector<std::string> kinds = {"summarization", "single_doc_qa",
                                    "multi_doc_qa", "multi_hop"};
  std::string language = "en";
};

struct TrainFlags {
  std::string config;
  std::string data;
  std::string out = "head.json";
  std::string log;
  std::size_t epochs = 100;
  double lr = 0.1;
  std::uint64_t seed = 0;
};

int RunSample(const SampleFlags& flags);
int RunCompress(const CompressFlags& flags);
int RunSweep(const SweepFlags& flags);
int RunSynth(const SynthFlags& flags);
int RunTrainHead(const TrainFlags& flags);

}  // namespace sdcc::cli

#endif  // SDCC_TOOLS_COMMANDS_H_
