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

// sdcc: command-line front end for the compression toolkit.

#include <iostream>

#include "CLI11.hpp"
#include "commands.h"

namespace {

void AddModelFlags(CLI::App* cmd, sdcc::cli::ModelFlags& flags) {
  cmd->add_option("--config", flags.config, "YAML toolkit config");
  cmd->add_option("--head", flags.head,
                  "Regression head JSON (default: zeros)");
  cmd->add_option("--encoder", flags.encoder, "toy or bridge")
      ->check(CLI::IsMember({"toy", "bridge"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-dynamic context compression toolkit"};
  app.require_subcommand(1);

  sdcc::cli::SampleFlags sample;
  CLI::App* data = app.add_subcommand("data", "Dataset utilities");
  data->require_subcommand(1);
  CLI::App* sample_cmd =
      data->add_subcommand("sample", "Filter by token length and sample");
  sample_cmd->add_option("--in", sample.in, "Input JSONL")->required();
  sample_cmd->add_option("--out", sample.out, "Output JSONL")->required();
  sample_cmd->add_option("--max-tokens", sample.max_tokens)
      ->check(CLI::PositiveNumber);
  sample_cmd->add_option("--n", sample.n, "Records to keep");
  sample_cmd->add_option("--seed", sample.seed);

  sdcc::cli::CompressFlags compress;
  CLI::App* compress_cmd =
      app.add_subcommand("compress", "Compress contexts to latent containers");
  compress_cmd->add_option("--in", compress.in, "JSONL with a context field")
      ->required();
  compress_cmd->add_option("--out", compress.out, "Binary container output")
      ->required();
  compress_cmd->add_option("--scale", compress.scale);
  compress_cmd->add_option("--backbone", compress.backbone)
      ->check(
          CLI::IsMember({"last_tokens", "compression_tokens", "mean_pooling"}));
  compress_cmd->add_option("--mode", compress.mode, "ratio or length")
      ->check(CLI::IsMember({"ratio", "length"}));
  AddModelFlags(compress_cmd, compress.model);

  sdcc::cli::SweepFlags sweep;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Accuracy/ratio scale sweep");
  sweep_cmd->add_option("--eval", sweep.eval, "Evaluation JSONL")->required();
  sweep_cmd->add_option("--report", sweep.report, "Report path (.csv or .json)")
      ->required();
  sweep_cmd->add_option("--scales", sweep.scales, "\"a..b:step\" or a,b,c");
  sweep_cmd->add_option("--backbone", sweep.backbone)
      ->check(
          CLI::IsMember({"last_tokens", "compression_tokens", "mean_pooling"}));
  sweep_cmd->add_option("--mode", sweep.mode)
      ->check(CLI::IsMember({"ratio", "length"}));
  sweep_cmd->add_option("--answerer", sweep.answerer)
      ->check(CLI::IsMember({"stub-correct", "stub-incorrect", "bridge"}));
  sweep_cmd->add_option("--partial", sweep.partial,
                        "Partial results path on failure");
  sweep_cmd->add_option("--by-source", sweep.by_source,
                        "Per-source breakdown CSV");
  sweep_cmd->add_option("--threads", sweep.threads, "0: all cores");
  AddModelFlags(sweep_cmd, sweep.model);

  sdcc::cli::SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Teacher data synthesis");
  synth_cmd->add_option("--phase", synth.phase)->check(CLI::IsMember({1, 2}));
  synth_cmd->add_option("--in", synth.in, "Seed JSONL with a context field")
      ->required();
  synth_cmd->add_option("--out", synth.out)->required();
  synth_cmd->add_option("--endpoint", synth.endpoint, "config.yaml[#section]")
      ->required();
  synth_cmd->add_option("--fixtures", synth.fixtures,
                        "Play back from fixtures");
  synth_cmd->add_option("--record", synth.record,
                        "Record fixtures to this file");
  synth_cmd->add_option("--skips", synth.skips, "Skip manifest path");
  synth_cmd->add_option("--kinds", synth.kinds, "Phase 1 task kinds")
      ->delimiter(',');
  synth_cmd->add_option("--language", synth.language)
      ->check(CLI::IsMember({"en", "zh"}));

  sdcc::cli::TrainFlags train;
  CLI::App* train_cmd =
      app.add_subcommand("train-head", "Fit the density head");
  train_cmd->add_option("--data", train.data, "Density JSONL")->required();
  train_cmd->add_option("--epochs", train.epochs);
  train_cmd->add_option("--lr", train.lr)->check(CLI::PositiveNumber);
  train_cmd->add_option("--out", train.out, "Head JSON output");
  train_cmd->add_option("--log", train.log, "Per-epoch JSONL log");
  train_cmd->add_option("--seed", train.seed);
  train_cmd->add_option("--config", train.config, "YAML toolkit config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample_cmd->parsed()) return sdcc::cli::RunSample(sample);
    if (compress_cmd->parsed()) return sdcc::cli::RunCompress(compress);
    if (sweep_cmd->parsed()) return sdcc::cli::RunSweep(sweep);
    if (synth_cmd->parsed()) return sdcc::cli::RunSynth(synth);
    if (train_cmd->parsed()) return sdcc::cli::RunTrainHead(train);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
