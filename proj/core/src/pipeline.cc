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

#include "sdcc/pipeline.h"

#include <cmath>
#include <string>

#include "sdcc/error.h"

namespace sdcc {
namespace {

double Silu(double x) { return x / (1.0 + std::exp(-x)); }

Matrix UniformMatrix(std::size_t rows, std::size_t cols, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.Uniform(-a, a);
  }
  return m;
}

}  // namespace

Projector Projector::Init(std::size_t input_size, std::size_t intermediate_size,
                          std::size_t output_size, std::uint64_t seed) {
  Rng rng(seed);
  Projector p;
  p.w1 = UniformMatrix(input_size, intermediate_size, rng);
  p.b1 = Vector::Zero(static_cast<Eigen::Index>(intermediate_size));
  p.w2 = UniformMatrix(intermediate_size, output_size, rng);
  p.b2 = Vector::Zero(static_cast<Eigen::Index>(output_size));
  p.Validate();
  return p;
}

Projector Projector::Zeros(std::size_t input_size,
                           std::size_t intermediate_size,
                           std::size_t output_size) {
  Projector p;
  p.w1 = Matrix::Zero(static_cast<Eigen::Index>(input_size),
                      static_cast<Eigen::Index>(intermediate_size));
  p.b1 = Vector::Zero(static_cast<Eigen::Index>(intermediate_size));
  p.w2 = Matrix::Zero(static_cast<Eigen::Index>(intermediate_size),
                      static_cast<Eigen::Index>(output_size));
  p.b2 = Vector::Zero(static_cast<Eigen::Index>(output_size));
  p.Validate();
  return p;
}

void Projector::Validate() const {
  if (w1.rows() < 1 || w1.cols() < 1 || w2.cols() < 1) {
    throw Error(ErrorCode::kShape, "projector sizes must be >= 1");
  }
  if (b1.size() != w1.cols() || w2.rows() != w1.cols() ||
      b2.size() != w2.cols()) {
    throw Error(ErrorCode::kShape, "projector layer shapes do not chain");
  }
  if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() ||
      !b2.allFinite()) {
    throw Error(ErrorCode::kShape, "projector has non-finite parameters");
  }
}

Matrix Project(const ExtractedFeatures& features, const Projector& projector) {
  if (features.data.cols() != projector.w1.rows()) {
    throw Error(ErrorCode::kShape, "feature width " +
                                       std::to_string(features.data.cols()) +
                                       " != projector input " +
                                       std::to_string(projector.w1.rows()));
  }
  Matrix hidden = features.data * projector.w1;
  hidden.rowwise() += projector.b1.transpose();
  if (projector.activation == Activation::kSilu) {
    hidden = hidden.unaryExpr([](double x) { return Silu(x); });
  }
  Matrix out = hidden * projector.w2;
  out.rowwise() += projector.b2.transpose();
  return out;
}

DecoderInput ExpandPlaceholder(const TokenSequence& prompt, std::size_t m) {
  if (m < 1) {
    throw Error(ErrorCode::kInvalidArgument, "expansion length must be >= 1");
  }
  std::size_t count = 0;
  std::size_t position = 0;
  for (std::size_t i = 0; i < prompt.size(); ++i) {
    if (prompt.tokens[i] == kPlaceholderId) {
      ++count;
      position = i;
    }
  }
  if (count != 1) {
    throw Error(ErrorCode::kFailedPrecondition,
                "prompt must hold exactly one placeholder, found " +
                    std::to_string(count));
  }
  DecoderInput out;
  out.tokens.tokenizer_id = prompt.tokenizer_id;
  out.tokens.tokens.reserve(prompt.size() - 1 + m);
  out.tokens.tokens.insert(
      out.tokens.tokens.end(), prompt.tokens.begin(),
      prompt.tokens.begin() + static_cast<std::ptrdiff_t>(position));
  out.tokens.tokens.insert(out.tokens.tokens.end(), m, kLatentSlotId);
  out.tokens.tokens.insert(
      out.tokens.tokens.end(),
      prompt.tokens.begin() + static_cast<std::ptrdiff_t>(position + 1),
      prompt.tokens.end());
  out.span_start = position;
  out.span_length = m;
  return out;
}

DecoderInput BuildDecoderInput(const TokenSequence& prompt,
                               const CompressedRepresentation& compressed,
                               std::optional<std::size_t> expected_hidden) {
  const auto width = static_cast<std::size_t>(compressed.latents.cols());
  if (expected_hidden && *expected_hidden != width) {
    throw Error(ErrorCode::kShape, "latent width " + std::to_string(width) +
                                       " != decoder embedding width " +
                                       std::to_string(*expected_hidden));
  }
  DecoderInput out = ExpandPlaceholder(
      prompt, static_cast<std::size_t>(compressed.latents.rows()));
  out.override_embeddings = compressed.latents;
  return out;
}

TokenSequence MakeQuestionPrompt(const Tokenizer& tokenizer,
                                 std::string_view question) {
  TokenSequence prompt;
  prompt.tokenizer_id = std::string(tokenizer.id());
  prompt.tokens.push_back(kPlaceholderId);
  const TokenSequence rest =
      tokenizer.Tokenize("\nQuestion: " + std::string(question) + "\nAnswer:");
  prompt.tokens.insert(prompt.tokens.end(), rest.tokens.begin(),
                       rest.tokens.end());
  return prompt;
}

void CheckPairing(Backbone backbone, PlanMode mode) {
  const bool ok =
      (backbone == Backbone::kMeanPooling) == (mode == PlanMode::kRatio);
  if (!ok) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(BackboneName(backbone)) + " cannot run in " +
                    std::string(PlanModeName(mode)) +
                    " mode (mean_pooling pairs with ratio, token backbones "
                    "with length)");
  }
}

RatioRandomizer::RatioRandomizer(RatioCandidates candidates, std::uint64_t seed)
    : candidates_(std::move(candidates)), rng_(seed) {}

double RatioRandomizer::Next() {
  return candidates_.factors()[rng_.UniformIndex(candidates_.size())];
}

Compressor::Compressor(const Encoder& encoder, RegressionHead head,
                       Projector projector, CompressorOptions options)
    : encoder_(encoder),
      head_(std::move(head)),
      projector_(std::move(projector)),
      options_(std::move(options)) {
  if (head_.hidden_size() != encoder_.hidden_size()) {
    throw Error(ErrorCode::kShape, "regression head width != encoder width");
  }
  projector_.Validate();
  if (projector_.input_size() != encoder_.hidden_size()) {
    throw Error(ErrorCode::kShape, "projector input != encoder width");
  }
}

std::size_t Compressor::SlotsFor(Backbone backbone) const {
  return backbone == Backbone::kCompressionTokens ? options_.lengths.max() : 0;
}

HiddenMatrix Compressor::EncodeContext(const TokenSequence& context,
                                       Backbone backbone) const {
  // Slots are appended before M is known, so only a causal encoder gives the
  // first M slots the same states as an M-slot encoding.
  if (backbone == Backbone::kCompressionTokens &&
      encoder_.attention_mode() != AttentionMode::kCausal) {
    throw Error(ErrorCode::kFailedPrecondition,
                "single-pass compression_tokens needs a causal encoder");
  }
  return encoder_.Encode(PrepareEncoderInput(context), SlotsFor(backbone));
}

CompressedRepresentation Compressor::Compress(
    const TokenSequence& context, double scale, Backbone backbone,
    PlanMode mode, std::optional<double> forced_factor) const {
  CheckPairing(backbone, mode);
  return CompressEncoded(EncodeContext(context, backbone), scale, backbone,
                         mode, forced_factor);
}

CompressedRepresentation Compressor::CompressEncoded(
    const HiddenMatrix& hidden, double scale, Backbone backbone, PlanMode mode,
    std::optional<double> forced_factor) const {
  CheckPairing(backbone, mode);
  if (hidden.slot_rows() != SlotsFor(backbone)) {
    throw Error(ErrorCode::kShape, "hidden matrix carries " +
                                       std::to_string(hidden.slot_rows()) +
                                       " slots, backbone expects " +
                                       std::to_string(SlotsFor(backbone)));
  }
  const std::size_t content = hidden.content_rows();
  const double y_hat = PredictDensity(LastHidden(hidden), head_);

  CompressedRepresentation out;
  out.backbone = backbone;
  out.plan = SelectPlan(y_hat, scale, mode, content, options_.ratios,
                        options_.lengths);
  if (forced_factor) {
    out.plan = ForceRatio(out.plan, *forced_factor, options_.ratios);
  }

  ExtractedFeatures features;
  switch (backbone) {
    case Backbone::kMeanPooling:
      features = MeanPool(hidden, *out.plan.window);
      break;
    case Backbone::kLastTokens:
      features = ExtractLastTokens(hidden, *out.plan.m_target);
      break;
    case Backbone::kCompressionTokens: {
      const std::size_t keep =
          hidden.rows() - hidden.slot_rows() + *out.plan.m_target;
      HiddenMatrix truncated;
      truncated.data = hidden.data.topRows(static_cast<Eigen::Index>(keep));
      truncated.roles.assign(
          hidden.roles.begin(),
          hidden.roles.begin() + static_cast<std::ptrdiff_t>(keep));
      features = ExtractCompressionTokens(truncated, *out.plan.m_target);
      break;
    }
  }
  out.latents = Project(features, projector_);
  return out;
}

}  // namespace sdcc
