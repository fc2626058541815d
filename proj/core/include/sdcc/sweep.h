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

#ifndef SDCC_SWEEP_H_
#define SDCC_SWEEP_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdcc/metrics.h"
#include "sdcc/pipeline.h"
#include "sdcc/records.h"
#include "sdcc/tokenizer.h"

namespace sdcc {

// Produces the decoder's answer for one compressed instance. Called from
// several threads at once during a sweep.
class Answerer {
 public:
  virtual ~Answerer() = default;
  virtual std::string Answer(const QARecord& record,
                             const DecoderInput& input) const = 0;
};

// Echoes the first reference answer when `correct(record)` holds and an
// empty string otherwise, so metric logic can be checked without a model.
class StubAnswerer final : public Answerer {
 public:
  using Predicate = std::function<bool(const QARecord&)>;

  static StubAnswerer AllCorrect();
  static StubAnswerer AllIncorrect();
  explicit StubAnswerer(Predicate correct) : correct_(std::move(correct)) {}

  std::string Answer(const QARecord& record,
                     const DecoderInput& input) const override;

 private:
  Predicate correct_;
};

struct SweepPoint {
  double scale = 0.0;
  double accuracy = 0.0;
  std::optional<double> avg_compression_ratio;  // undefined: nothing correct
  double ratio_log2_variance = 0.0;
  std::size_t n_correct = 0;
  std::size_t n_total = 0;
};

// {-2, -1.5, ..., 4}: 13 points.
std::vector<double> DefaultScaleGrid();

// "a..b:step" (inclusive) or a comma-separated list.
std::vector<double> ParseScaleSpec(std::string_view spec);

struct SweepOptions {
  std::vector<double> scales = DefaultScaleGrid();
  Backbone backbone = Backbone::kMeanPooling;
  PlanMode mode = PlanMode::kRatio;
  std::size_t threads = 0;  // 0: hardware concurrency
  // Completed points are written here (CSV) if a sample fails mid-sweep.
  std::optional<std::filesystem::path> partial_results_path;
  // Receives every per-sample evaluation, in sample order, per scale.
  std::function<void(double scale, std::span<const EvalRecord>)> on_point;
};

// Each context is encoded once and reused for every scale. Points come back
// in scale order; aggregation folds samples in input order.
std::vector<SweepPoint> ScaleSweep(std::span<const QARecord> eval_set,
                                   const Compressor& compressor,
                                   const Tokenizer& tokenizer,
                                   const Answerer& answerer,
                                   const SweepOptions& options);

SweepPoint SummarizePoint(double scale, std::span<const EvalRecord> records);

// One point per distinct record source; records without a source are
// grouped under "unknown".
std::map<std::string, SweepPoint> SummarizeBySource(
    double scale, std::span<const EvalRecord> records);

}  // namespace sdcc

#endif  // SDCC_SWEEP_H_
