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

#include "sdcc/density.h"

#include <cmath>
#include <fstream>
#include <string>

#include "json.hpp"
#include "sdcc/error.h"
#include "sdcc/random.h"

namespace sdcc {
namespace {

using nlohmann::json;

constexpr double kDivergenceThreshold = 1e6;

double Dot(const Vector& w, const Matrix& x, Eigen::Index row) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) acc += w[k] * x(row, k);
  return acc;
}

double MeanSquaredError(const Matrix& features, std::span<const double> labels,
                        const RegressionHead& head) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double r = Dot(head.weights, features, i) + head.bias -
                     labels[static_cast<std::size_t>(i)];
    acc += r * r;
  }
  return acc / static_cast<double>(features.rows());
}

}  // namespace

double DensityLabel(std::size_t context_length, std::size_t summary_length) {
  if (summary_length == 0) {
    throw Error(ErrorCode::kDegenerateOutput,
                "summary length is zero; no density label");
  }
  if (context_length == 0) {
    throw Error(ErrorCode::kInvalidArgument, "context length must be >= 1");
  }
  // Split each length into mantissa and binary exponent. The exponent
  // difference is an integer and the mantissa term depends on neither
  // exponent; snapping it to a 2^-40 grid makes the sum exact, so doubling
  // the context adds exactly 1.
  int context_exp = 0;
  int summary_exp = 0;
  const double context_mant =
      std::frexp(static_cast<double>(context_length), &context_exp);
  const double summary_mant =
      std::frexp(static_cast<double>(summary_length), &summary_exp);
  constexpr double kGrid = 0x1p40;
  const double fraction =
      std::nearbyint(std::log2(context_mant / summary_mant) * kGrid) / kGrid;
  return static_cast<double>(context_exp - summary_exp) + fraction;
}

DensityRecord MakeDensityRecord(TokenSequence context, TokenSequence summary) {
  DensityRecord r;
  r.context_length = context.size();
  r.summary_length = summary.size();
  r.label = DensityLabel(r.context_length, r.summary_length);
  r.context = std::move(context);
  r.summary = std::move(summary);
  return r;
}

std::vector<DensityRecord> LoadDensityRecords(const std::filesystem::path& path,
                                              const Tokenizer& tokenizer) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::vector<DensityRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_number) + ": ";
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kSchema, where + "invalid JSON: " + e.what());
    }
    for (const char* field : {"context", "summary"}) {
      if (!obj.contains(field) || !obj[field].is_string()) {
        throw Error(ErrorCode::kSchema,
                    where + "missing string field \"" + field + "\"");
      }
    }
    DensityRecord r = MakeDensityRecord(
        tokenizer.Tokenize(obj["context"].get<std::string>()),
        tokenizer.Tokenize(obj["summary"].get<std::string>()));
    if (obj.contains("L_ctx") &&
        obj["L_ctx"].get<std::size_t>() != r.context_length) {
      throw Error(ErrorCode::kSchema, where +
                                          "L_ctx disagrees with tokenizer " +
                                          std::string(tokenizer.id()));
    }
    if (obj.contains("L_sum") &&
        obj["L_sum"].get<std::size_t>() != r.summary_length) {
      throw Error(ErrorCode::kSchema, where +
                                          "L_sum disagrees with tokenizer " +
                                          std::string(tokenizer.id()));
    }
    if (obj.contains("y") && obj["y"].get<double>() != r.label) {
      throw Error(ErrorCode::kSchema, where + "y != log2(L_ctx / L_sum)");
    }
    records.push_back(std::move(r));
  }
  return records;
}

void WriteDensityRecords(const std::filesystem::path& path,
                         std::span<const DensityRecord> records,
                         const Tokenizer& tokenizer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const DensityRecord& r : records) {
    json obj = {{"context", tokenizer.Detokenize(r.context)},
                {"summary", tokenizer.Detokenize(r.summary)},
                {"L_ctx", r.context_length},
                {"L_sum", r.summary_length},
                {"y", r.label},
                {"tokenizer", std::string(tokenizer.id())}};
    out << obj.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

RegressionHead RegressionHead::Zeros(std::size_t hidden_size) {
  RegressionHead head;
  head.weights = Vector::Zero(static_cast<Eigen::Index>(hidden_size));
  return head;
}

RegressionHead LoadHead(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  json obj;
  try {
    obj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchema, path.string() + ": " + e.what());
  }
  if (!obj.contains("weights") || !obj["weights"].is_array() ||
      !obj.contains("bias")) {
    throw Error(ErrorCode::kSchema, path.string() + ": need weights and bias");
  }
  const auto weights = obj["weights"].get<std::vector<double>>();
  RegressionHead head;
  head.weights = Eigen::Map<const Vector>(
      weights.data(), static_cast<Eigen::Index>(weights.size()));
  head.bias = obj["bias"].get<double>();
  if (!head.weights.allFinite() || !std::isfinite(head.bias)) {
    throw Error(ErrorCode::kSchema, path.string() + ": non-finite head");
  }
  return head;
}

void SaveHead(const std::filesystem::path& path, const RegressionHead& head) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  json obj = {{"weights",
               std::vector<double>(head.weights.begin(), head.weights.end())},
              {"bias", head.bias}};
  out << obj.dump() << '\n';
}

double PredictDensity(const Vector& h_last, const RegressionHead& head) {
  if (h_last.size() != head.weights.size()) {
    throw Error(ErrorCode::kShape, "h_last has " +
                                       std::to_string(h_last.size()) +
                                       " entries, head expects " +
                                       std::to_string(head.weights.size()));
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < h_last.size(); ++k) {
    acc += head.weights[k] * h_last[k];
  }
  return acc + head.bias;
}

MseResult MseAndGradient(std::span<const PredictionPair> pairs) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "mse of an empty list");
  }
  const double n = static_cast<double>(pairs.size());
  MseResult out;
  out.gradient.reserve(pairs.size());
  double acc = 0.0;
  for (const PredictionPair& p : pairs) {
    const double r = p.predicted - p.target;
    acc += r * r;
    out.gradient.push_back(2.0 * r / n);
  }
  out.mse = acc / n;
  return out;
}

LossBreakdown JointLoss(double lm_loss, double mse, double lambda) {
  if (!(lm_loss >= 0.0) || !(mse >= 0.0) || !(lambda >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "lm_loss, mse and lambda must be non-negative");
  }
  return LossBreakdown{lm_loss, mse, lambda, lm_loss + lambda * mse};
}

TrainResult FitHead(const Matrix& features, std::span<const double> labels,
                    const TrainOptions& options) {
  if (features.rows() < 1 ||
      static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need one label per feature row and at least one row");
  }
  if (!(options.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning_rate must be > 0");
  }
  const Eigen::Index n = features.rows();
  const Eigen::Index d = features.cols();

  TrainResult result;
  result.head = RegressionHead::Zeros(static_cast<std::size_t>(d));
  if (options.init_stddev > 0.0) {
    Rng rng(options.seed);
    for (Eigen::Index k = 0; k < d; ++k) {
      result.head.weights[k] = rng.Normal() * options.init_stddev;
    }
  }
  RegressionHead& head = result.head;

  std::vector<PredictionPair> pairs(static_cast<std::size_t>(n));
  Vector grad_w(d);
  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    for (Eigen::Index i = 0; i < n; ++i) {
      pairs[static_cast<std::size_t>(i)] = {
          Dot(head.weights, features, i) + head.bias,
          labels[static_cast<std::size_t>(i)]};
    }
    const MseResult mse = MseAndGradient(pairs);
    grad_w.setZero();
    double grad_b = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g = mse.gradient[static_cast<std::size_t>(i)];
      for (Eigen::Index k = 0; k < d; ++k) grad_w[k] += g * features(i, k);
      grad_b += g;
    }
    head.weights -= options.learning_rate * grad_w;
    head.bias -= options.learning_rate * grad_b;

    const double after = MeanSquaredError(features, labels, head);
    if (!std::isfinite(after) || after > kDivergenceThreshold) {
      throw Error(ErrorCode::kDiverged,
                  "mse " + std::to_string(after) + " at epoch " +
                      std::to_string(epoch) + "; try a smaller learning_rate");
    }
    result.mse_history.push_back(after);
    if (options.on_epoch) options.on_epoch(epoch, after);
  }
  return result;
}

TrainResult TrainHead(std::span<const DensityRecord> records,
                      const Encoder& encoder, const TrainOptions& options) {
  if (records.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "head training needs at least two records");
  }
  Matrix features(static_cast<Eigen::Index>(records.size()),
                  static_cast<Eigen::Index>(encoder.hidden_size()));
  std::vector<double> labels;
  labels.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const HiddenMatrix hidden =
        encoder.Encode(PrepareEncoderInput(records[i].context), 0);
    features.row(static_cast<Eigen::Index>(i)) = LastHidden(hidden).transpose();
    labels.push_back(records[i].label);
  }
  return FitHead(features, labels, options);
}

}  // namespace sdcc
