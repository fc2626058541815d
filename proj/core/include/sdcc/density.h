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

// Information-density supervision: log-factor labels from summary lengths,
// the linear regression head on the sentinel state, and its training.

#ifndef SDCC_DENSITY_H_
#define SDCC_DENSITY_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sdcc/encoder.h"
#include "sdcc/matrix.h"
#include "sdcc/tokenizer.h"

namespace sdcc {

// log2(context_length / summary_length) to within 2^-40, computed so that
// label(2L, s) == label(L, s) + 1 holds exactly. Both lengths must be >= 1;
// a zero summary length throws kDegenerateOutput.
double DensityLabel(std::size_t context_length, std::size_t summary_length);

struct DensityRecord {
  TokenSequence context;
  TokenSequence summary;
  std::size_t context_length = 0;
  std::size_t summary_length = 0;
  double label = 0.0;
};

DensityRecord MakeDensityRecord(TokenSequence context, TokenSequence summary);

// JSONL: {"context": str, "summary": str, "L_ctx": n, "L_sum": n, "y": x,
//         "tokenizer": id}. Loading re-tokenizes the text and rejects lines
// whose stored lengths or label disagree with it.
std::vector<DensityRecord> LoadDensityRecords(const std::filesystem::path& path,
                                              const Tokenizer& tokenizer);
void WriteDensityRecords(const std::filesystem::path& path,
                         std::span<const DensityRecord> records,
                         const Tokenizer& tokenizer);

struct RegressionHead {
  Vector weights;
  double bias = 0.0;

  static RegressionHead Zeros(std::size_t hidden_size);
  std::size_t hidden_size() const {
    return static_cast<std::size_t>(weights.size());
  }
};

// JSON {"weights": [...], "bias": b}.
RegressionHead LoadHead(const std::filesystem::path& path);
void SaveHead(const std::filesystem::path& path, const RegressionHead& head);

// dot(weights, h_last) + bias. Throws kShape on dimension mismatch.
double PredictDensity(const Vector& h_last, const RegressionHead& head);

struct PredictionPair {
  double predicted = 0.0;
  double target = 0.0;
};

struct MseResult {
  double mse = 0.0;
  std::vector<double> gradient;  // d(mse)/d(predicted_i) = 2(p_i - t_i)/N
};

MseResult MseAndGradient(std::span<const PredictionPair> pairs);

struct LossBreakdown {
  double lm_loss = 0.0;
  double mse = 0.0;
  double lambda = 1.0;
  double total = 0.0;  // lm_loss + lambda * mse
};

LossBreakdown JointLoss(double lm_loss, double mse, double lambda);

struct TrainOptions {
  std::size_t epochs = 100;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  // Zero keeps the all-zeros initialization; otherwise weights start from a
  // seeded normal with this standard deviation.
  double init_stddev = 0.0;
  // Called after each epoch's update with the 1-based epoch and its mse.
  std::function<void(std::size_t epoch, double mse)> on_epoch;
};

struct TrainResult {
  RegressionHead head;
  std::vector<double> mse_history;  // one entry per epoch, post-update
};

// Full-batch gradient descent on MSE over rows of `features` (one h_last
// per row). The reduction order is fixed, so results are bit-reproducible.
// Throws kDiverged if mse exceeds 1e6.
TrainResult FitHead(const Matrix& features, std::span<const double> labels,
                    const TrainOptions& options);

// Encodes every record once with the frozen encoder and fits the head on
// (h_last, label) pairs. Needs at least two records.
TrainResult TrainHead(std::span<const DensityRecord> records,
                      const Encoder& encoder, const TrainOptions& options);

}  // namespace sdcc

#endif  // SDCC_DENSITY_H_
