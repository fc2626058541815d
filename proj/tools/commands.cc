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

#include "commands.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "sdcc/bridge_client.h"
#include "sdcc/config.h"
#include "sdcc/container.h"
#include "sdcc/density.h"
#include "sdcc/error.h"
#include "sdcc/http_transport.h"
#include "sdcc/pipeline.h"
#include "sdcc/records.h"
#include "sdcc/report.h"
#include "sdcc/sampling.h"
#include "sdcc/sweep.h"
#include "sdcc/synthesis.h"
#include "sdcc/tokenizer.h"

namespace sdcc::cli {
namespace {

using nlohmann::json;

ToolkitConfig ConfigFrom(const std::string& path) {
  return path.empty() ? ToolkitConfig{} : LoadConfig(path);
}

// Reads the "context" field of every non-blank line.
std::vector<std::string> LoadContexts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line).at("context").get<std::string>());
    } catch (const json::exception&) {
      throw Error(ErrorCode::kSchema, path + " line " +
                                          std::to_string(line_number) +
                                          ": missing field \"context\"");
    }
  }
  return out;
}

PlanMode ModeFor(const std::string& mode, Backbone backbone) {
  if (!mode.empty()) return ParsePlanMode(mode);
  return backbone == Backbone::kMeanPooling ? PlanMode::kRatio
                                            : PlanMode::kLength;
}

// Owns everything a Compressor borrows.
struct Model {
  ToolkitConfig config;
  std::unique_ptr<Encoder> encoder;
  std::optional<Compressor> compressor;
};

std::unique_ptr<Model> BuildModel(const ModelFlags& flags) {
  auto model = std::make_unique<Model>();
  model->config = ConfigFrom(flags.config);
  const ToolkitConfig& cfg = model->config;
  if (flags.encoder == "bridge") {
    BridgeClient client(cfg.bridge.value_or(BridgeConfig{}),
                        std::make_shared<HttplibTransport>());
    model->encoder = std::make_unique<RemoteEncoder>(std::move(client),
                                                     cfg.encoder.attention);
  } else {
    model->encoder = std::make_unique<ToyEncoder>(cfg.encoder);
  }
  const std::size_t d = model->encoder->hidden_size();
  RegressionHead head =
      flags.head.empty() ? RegressionHead::Zeros(d) : LoadHead(flags.head);
  model->compressor.emplace(
      *model->encoder, std::move(head),
      Projector::Init(d, cfg.projector_intermediate, cfg.projector_output,
                      cfg.projector_seed),
      CompressorOptions{cfg.ratios, cfg.lengths});
  return model;
}

std::string Number(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", *v);
  return buf;
}

}  // namespace

int RunSample(const SampleFlags& flags) {
  const std::vector<QARecord> records = LoadRecords(flags.in);
  ByteTokenizer tokenizer;
  SampleResult result = FilterAndSample(records, tokenizer, flags.max_tokens,
                                        flags.n, flags.seed);
  WriteRecords(flags.out, result.records);
  std::cerr << "kept " << result.records.size() << " of " << result.survivors
            << " records under " << flags.max_tokens << " tokens (input "
            << records.size() << ")\n";
  if (result.short_of_request) {
    std::cerr << "warning: requested " << flags.n << " but only "
              << result.survivors << " records survived the filter\n";
  }
  return 0;
}

int RunCompress(const CompressFlags& flags) {
  const std::unique_ptr<Model> model = BuildModel(flags.model);
  const Backbone backbone = ParseBackbone(flags.backbone);
  const PlanMode mode = ModeFor(flags.mode, backbone);
  CheckPairing(backbone, mode);
  ByteTokenizer tokenizer;

  // The whole invocation is one batch for ratio randomization.
  std::optional<double> forced;
  if (model->config.ratio_randomization && mode == PlanMode::kRatio) {
    forced = RatioRandomizer(model->config.ratios, model->config.training_seed)
                 .Next();
  }

  std::ofstream out(flags.out, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + flags.out);
  std::size_t count = 0;
  for (const std::string& context : LoadContexts(flags.in)) {
    const CompressedRepresentation rep = model->compressor->Compress(
        tokenizer.Tokenize(context), flags.scale, backbone, mode, forced);
    WriteRepresentation(out, rep);
    std::cout << count << "\tL=" << rep.plan.context_length
              << "\tM=" << rep.latents.rows()
              << "\tfactor=" << Number(rep.plan.SelectedFactor()) << "\n";
    ++count;
  }
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + flags.out);
  std::cerr << "wrote " << count << " representations to " << flags.out << "\n";
  return 0;
}

int RunSweep(const SweepFlags& flags) {
  const std::unique_ptr<Model> model = BuildModel(flags.model);
  const std::vector<QARecord> eval = LoadRecords(flags.eval);
  ByteTokenizer tokenizer;

  std::unique_ptr<Answerer> answerer;
  if (flags.answerer == "bridge") {
    answerer = std::make_unique<RemoteAnswerer>(
        BridgeClient(model->config.bridge.value_or(BridgeConfig{}),
                     std::make_shared<HttplibTransport>()));
  } else if (flags.answerer == "stub-incorrect") {
    answerer = std::make_unique<StubAnswerer>(StubAnswerer::AllIncorrect());
  } else {
    answerer = std::make_unique<StubAnswerer>(StubAnswerer::AllCorrect());
  }

  SweepOptions options;
  options.scales = ParseScaleSpec(flags.scales);
  options.backbone = ParseBackbone(flags.backbone);
  options.mode = ModeFor(flags.mode, options.backbone);
  options.threads = flags.threads;
  if (!flags.partial.empty()) options.partial_results_path = flags.partial;
  std::map<std::string, std::vector<SweepPoint>> by_source;
  if (!flags.by_source.empty()) {
    options.on_point = [&](double scale, std::span<const EvalRecord> records) {
      for (auto& [source, point] : SummarizeBySource(scale, records)) {
        by_source[source].push_back(point);
      }
    };
  }

  const std::vector<SweepPoint> points =
      ScaleSweep(eval, *model->compressor, tokenizer, *answerer, options);
  EmitReport(points, FormatForPath(flags.report), flags.report);

  if (!flags.by_source.empty()) {
    std::ofstream out(flags.by_source, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + flags.by_source);
    bool header = true;
    for (const auto& [source, source_points] : by_source) {
      std::istringstream rows(FormatReport(source_points, ReportFormat::kCsv));
      std::string row;
      std::getline(rows, row);
      if (header) out << "source," << row << '\n';
      header = false;
      while (std::getline(rows, row)) out << source << ',' << row << '\n';
    }
  }

  std::cout << "scale\taccuracy\tavg_ratio\tlog2_var\tn_correct\n";
  for (const SweepPoint& p : points) {
    std::cout << Number(p.scale) << '\t' << Number(p.accuracy) << '\t'
              << Number(p.avg_compression_ratio) << '\t'
              << Number(p.ratio_log2_variance) << '\t' << p.n_correct << '/'
              << p.n_total << '\n';
  }
  return 0;
}

int RunSynth(const SynthFlags& flags) {
  const TeacherEndpoint endpoint = LoadEndpoint(flags.endpoint);
  std::unique_ptr<TeacherClient> teacher;
  if (!flags.fixtures.empty()) {
    teacher = std::make_unique<TeacherClient>(
        endpoint, FixtureStore::Load(flags.fixtures));
  } else {
    teacher = std::make_unique<TeacherClient>(
        endpoint, std::make_shared<HttplibTransport>());
    if (!flags.record.empty()) teacher->EnableRecording();
  }
  const std::vector<std::string> contexts = LoadContexts(flags.in);
  const Language language = ParseLanguage(flags.language);
  ByteTokenizer tokenizer;
  const std::string skips_path =
      flags.skips.empty() ? flags.out + ".skips.jsonl" : flags.skips;

  std::vector<SynthesisSkip> skipped;
  if (flags.phase == 1) {
    std::vector<SynthesisTask> tasks;
    for (const std::string& kind : flags.kinds) {
      tasks.push_back(SynthesisTask::For(ParseTaskKind(kind), language));
    }
    Phase1Result result =
        SynthesizeTaskBatch(contexts, tasks, *teacher, tokenizer);
    WriteRecords(flags.out, result.records);
    skipped = std::move(result.skipped);
    std::cerr << "wrote " << result.records.size() << " records to "
              << flags.out << "\n";
  } else {
    DensityDataset dataset =
        BuildDensityDataset(contexts, *teacher, tokenizer, language);
    WriteDensityRecords(flags.out, dataset.records, tokenizer);
    std::size_t negative = 0;
    for (const DensityRecord& r : dataset.records) negative += r.label < 0.0;
    skipped = std::move(dataset.skipped);
    std::cerr << "wrote " << dataset.records.size() << " density records to "
              << flags.out;
    if (negative > 0) std::cerr << " (" << negative << " with negative labels)";
    std::cerr << "\n";
  }
  WriteSkipManifest(skips_path, skipped);
  if (!skipped.empty()) {
    std::cerr << skipped.size() << " skipped; see " << skips_path << "\n";
  }
  if (!flags.record.empty() && !teacher->playback()) {
    teacher->Recorded().Save(flags.record);
  }
  return 0;
}

int RunTrainHead(const TrainFlags& flags) {
  const ToolkitConfig cfg = ConfigFrom(flags.config);
  ByteTokenizer tokenizer;
  const std::vector<DensityRecord> records =
      LoadDensityRecords(flags.data, tokenizer);
  const ToyEncoder encoder(cfg.encoder);

  std::ofstream log;
  if (!flags.log.empty()) {
    log.open(flags.log, std::ios::trunc);
    if (!log) throw Error(ErrorCode::kIo, "cannot write " + flags.log);
  }
  TrainOptions options;
  options.epochs = flags.epochs;
  options.learning_rate = flags.lr;
  options.seed = flags.seed;
  options.on_epoch = [&](std::size_t epoch, double mse) {
    if (log.is_open())
      log << json{{"epoch", epoch}, {"mse", mse}}.dump() << '\n';
  };
  const TrainResult result = TrainHead(records, encoder, options);
  SaveHead(flags.out, result.head);
  std::cerr << "trained on " << records.size() << " records for "
            << flags.epochs << " epochs; final mse "
            << (result.mse_history.empty() ? std::string("n/a")
                                           : Number(result.mse_history.back()))
            << "; head written to " << flags.out << "\n";
  return 0;
}

}  // namespace sdcc::cli
