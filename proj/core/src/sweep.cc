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

#include "sdcc/sweep.h"

#include <charconv>
#include <cmath>
#include <string>

#include "parallel.h"
#include "sdcc/error.h"
#include "sdcc/report.h"

namespace sdcc {
namespace {

double ParseDouble(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "not a number: \"" + std::string(text) + "\"");
  }
  return value;
}

}  // namespace

StubAnswerer StubAnswerer::AllCorrect() {
  return StubAnswerer([](const QARecord&) { return true; });
}

StubAnswerer StubAnswerer::AllIncorrect() {
  return StubAnswerer([](const QARecord&) { return false; });
}

std::string StubAnswerer::Answer(const QARecord& record,
                                 const DecoderInput&) const {
  if (!correct_(record) || record.answers.empty()) return "";
  return record.answers.front();
}

std::vector<double> DefaultScaleGrid() { return ParseScaleSpec("-2..4:0.5"); }

std::vector<double> ParseScaleSpec(std::string_view spec) {
  std::vector<double> out;
  const std::size_t dots = spec.find("..");
  if (dots != std::string_view::npos) {
    const std::size_t colon = spec.find(':', dots);
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "range needs a step: \"" + std::string(spec) + "\"");
    }
    const double lo = ParseDouble(spec.substr(0, dots));
    const double hi = ParseDouble(spec.substr(dots + 2, colon - dots - 2));
    const double step = ParseDouble(spec.substr(colon + 1));
    if (!(step > 0.0) || hi < lo) {
      throw Error(ErrorCode::kInvalidArgument,
                  "bad scale range \"" + std::string(spec) + "\"");
    }
    // Index-based so the points are exact multiples of the step.
    const auto n =
        static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
      out.push_back(lo + static_cast<double>(i) * step);
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t comma = spec.find(',', start);
    const std::size_t end =
        comma == std::string_view::npos ? spec.size() : comma;
    out.push_back(ParseDouble(spec.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

SweepPoint SummarizePoint(double scale, std::span<const EvalRecord> records) {
  if (records.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep point with no samples");
  }
  SweepPoint point;
  point.scale = scale;
  point.n_total = records.size();
  std::vector<CompressionPlan> plans;
  plans.reserve(records.size());
  for (const EvalRecord& r : records) {
    point.n_correct += static_cast<std::size_t>(r.correct);
    plans.push_back(r.plan);
  }
  point.accuracy =
      static_cast<double>(point.n_correct) / static_cast<double>(point.n_total);
  point.avg_compression_ratio = ValidityFilteredRatio(records);
  point.ratio_log2_variance = RatioLog2Variance(plans);
  return point;
}

std::map<std::string, SweepPoint> SummarizeBySource(
    double scale, std::span<const EvalRecord> records) {
  std::map<std::string, std::vector<EvalRecord>> groups;
  for (const EvalRecord& r : records) {
    groups[r.record.source.empty() ? "unknown" : r.record.source].push_back(r);
  }
  std::map<std::string, SweepPoint> out;
  for (const auto& [source, group] : groups) {
    out.emplace(source, SummarizePoint(scale, group));
  }
  return out;
}

std::vector<SweepPoint> ScaleSweep(std::span<const QARecord> eval_set,
                                   const Compressor& compressor,
                                   const Tokenizer& tokenizer,
                                   const Answerer& answerer,
                                   const SweepOptions& options) {
  if (eval_set.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty evaluation set");
  }
  if (options.scales.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no scales to sweep");
  }
  CheckPairing(options.backbone, options.mode);
  const std::size_t n = eval_set.size();
  const std::size_t workers = internal::ResolveThreads(options.threads, n);

  std::vector<HiddenMatrix> hidden(n);
  std::vector<TokenSequence> prompts(n);
  std::vector<std::size_t> lengths(n);
  internal::ParallelFor(n, workers, [&](std::size_t i) {
    const TokenSequence context = tokenizer.Tokenize(eval_set[i].context);
    lengths[i] = context.size();
    hidden[i] = compressor.EncodeContext(context, options.backbone);
    prompts[i] = MakeQuestionPrompt(tokenizer, eval_set[i].question);
  });

  std::vector<SweepPoint> points;
  std::vector<EvalRecord> evals(n);
  for (double scale : options.scales) {
    try {
      internal::ParallelFor(n, workers, [&](std::size_t i) {
        const CompressedRepresentation rep = compressor.CompressEncoded(
            hidden[i], scale, options.backbone, options.mode);
        const DecoderInput input = BuildDecoderInput(prompts[i], rep);
        EvalRecord& e = evals[i];
        e.record = eval_set[i];
        e.plan = rep.plan;
        e.output_text = answerer.Answer(eval_set[i], input);
        e.correct = SubstringAccuracy(e.output_text, eval_set[i].answers);
        e.original_length = lengths[i];
        e.compressed_length = rep.plan.LatentCount();
      });
    } catch (...) {
      if (options.partial_results_path && !points.empty()) {
        EmitReport(points, ReportFormat::kCsv, *options.partial_results_path);
      }
      throw;
    }
    points.push_back(SummarizePoint(scale, evals));
    if (options.on_point) options.on_point(scale, evals);
  }
  return points;
}

}  // namespace sdcc
