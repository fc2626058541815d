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

#ifndef SDCC_PIPELINE_H_
#define SDCC_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <optional>

#include "sdcc/backbones.h"
#include "sdcc/density.h"
#include "sdcc/drs.h"
#include "sdcc/encoder.h"
#include "sdcc/matrix.h"
#include "sdcc/random.h"
#include "sdcc/tokenizer.h"

namespace sdcc {

enum class Activation { kSilu, kIdentity };

// Two-layer MLP mapping encoder features into decoder input embeddings:
//   out = act(x * w1 + b1) * w2 + b2
struct Projector {
  Matrix w1;  // input_size x intermediate_size
  Vector b1;
  Matrix w2;  // intermediate_size x output_size
  Vector b2;
  Activation activation = Activation::kSilu;

  // Uniform(-a, a) weights with a = sqrt(6 / (fan_in + fan_out)), zero biases.
  static Projector Init(std::size_t input_size, std::size_t intermediate_size,
                        std::size_t output_size, std::uint64_t seed);
  static Projector Zeros(std::size_t input_size, std::size_t intermediate_size,
                         std::size_t output_size);

  std::size_t input_size() const { return static_cast<std::size_t>(w1.rows()); }
  std::size_t intermediate_size() const {
    return static_cast<std::size_t>(w1.cols());
  }
  std::size_t output_size() const {
    return static_cast<std::size_t>(w2.cols());
  }

  void Validate() const;
};

Matrix Project(const ExtractedFeatures& features, const Projector& projector);

struct CompressedRepresentation {
  Matrix latents;  // M x d_dec
  CompressionPlan plan;
  Backbone backbone = Backbone::kMeanPooling;
};

struct DecoderInput {
  TokenSequence tokens;
  std::size_t span_start = 0;
  std::size_t span_length = 0;
  Matrix override_embeddings;  // span_length x d_dec, empty in a skeleton
};

// Replaces the single kPlaceholderId in `prompt` with m kLatentSlotId
// positions and records them as the override span.
DecoderInput ExpandPlaceholder(const TokenSequence& prompt, std::size_t m);

// expected_hidden, when given, is the decoder embedding width; a mismatch
// with the latents throws kShape.
DecoderInput BuildDecoderInput(
    const TokenSequence& prompt, const CompressedRepresentation& compressed,
    std::optional<std::size_t> expected_hidden = std::nullopt);

// [placeholder] + tokenize("\nQuestion: <q>\nAnswer:").
TokenSequence MakeQuestionPrompt(const Tokenizer& tokenizer,
                                 std::string_view question);

// Mean pooling pairs with ratio mode; token backbones pair with length mode.
void CheckPairing(Backbone backbone, PlanMode mode);

// Draws one factor per batch uniformly from the candidate set. The sequence
// is a pure function of the seed.
class RatioRandomizer {
 public:
  RatioRandomizer(RatioCandidates candidates, std::uint64_t seed);

  double Next();

 private:
  RatioCandidates candidates_;
  Rng rng_;
};

struct CompressorOptions {
  RatioCandidates ratios = RatioCandidates::Default();
  LengthCandidates lengths = LengthCandidates::Default();
};

// Single-pass compression: one Encode call produces both the sentinel state
// that drives the ratio prediction and the rows that get extracted.
class Compressor {
 public:
  // The encoder must outlive the compressor.
  Compressor(const Encoder& encoder, RegressionHead head, Projector projector,
             CompressorOptions options = {});

  // forced_factor overrides the selected ratio (ratio mode only) and marks
  // the plan as randomized.
  CompressedRepresentation Compress(
      const TokenSequence& context, double scale, Backbone backbone,
      PlanMode mode, std::optional<double> forced_factor = std::nullopt) const;

  // Encodes once for reuse across several scales. Slot count depends only
  // on the backbone.
  HiddenMatrix EncodeContext(const TokenSequence& context,
                             Backbone backbone) const;

  CompressedRepresentation CompressEncoded(
      const HiddenMatrix& hidden, double scale, Backbone backbone,
      PlanMode mode, std::optional<double> forced_factor = std::nullopt) const;

  std::size_t SlotsFor(Backbone backbone) const;

  const Encoder& encoder() const { return encoder_; }
  const RegressionHead& head() const { return head_; }
  const Projector& projector() const { return projector_; }
  const CompressorOptions& options() const { return options_; }

 private:
  const Encoder& encoder_;
  RegressionHead head_;
  Projector projector_;
  CompressorOptions options_;
};

}  // namespace sdcc

#endif  // SDCC_PIPELINE_H_
