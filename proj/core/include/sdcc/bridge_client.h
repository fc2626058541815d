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

// Client side of the model bridge: a remote server hosting a real model that
// answers encode, lm_loss and generate requests.
//
//   GET  /health      -> {"v":1, "model": id, "hidden_size": d,
//                         "capabilities": {"encode": b, "lm_loss": b,
//                                          "generate": b}}
//   POST /v1/encode   {"v":1, "tokens":[...], "attention_mode": m,
//                      "appended_slots": k}
//                     -> {"v":1, "shape":[L, d], "data": base64}
//   POST /v1/lm_loss  {"v":1, "tokens":[...], "target": str}
//                     -> {"v":1, "loss": x}
//   POST /v1/generate {"v":1, "tokens":[...], "override_span":[start, len],
//                      "shape":[len, d], "latents": base64}
//                     -> {"v":1, "text": str}
//
// Matrices travel as base64 of little-endian float32, row-major. Errors come
// back as non-2xx with {"v":1, "error": name, "message": str}.

#ifndef SDCC_BRIDGE_CLIENT_H_
#define SDCC_BRIDGE_CLIENT_H_

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "sdcc/encoder.h"
#include "sdcc/http_transport.h"
#include "sdcc/matrix.h"
#include "sdcc/sweep.h"

namespace sdcc {

inline constexpr int kBridgeProtocolVersion = 1;

struct BridgeConfig {
  std::string base_url = "http://127.0.0.1:8765";
  double timeout_s = 30.0;
};

// Wire codec. Decoding throws kShape when the byte count is not
// rows * cols * 4 and kProtocol on malformed base64.
std::string EncodeMatrixBase64(const Matrix& matrix);
Matrix DecodeMatrixBase64(std::string_view base64, std::size_t rows,
                          std::size_t cols);

struct BridgeHealth {
  std::string model;
  std::size_t hidden_size = 0;
  bool can_encode = true;
  bool can_lm_loss = true;
  bool can_generate = false;
};

class BridgeClient {
 public:
  BridgeClient(BridgeConfig config, std::shared_ptr<HttpTransport> transport);

  BridgeHealth Health() const;
  // Returns the raw (L, d) matrix; row roles are the caller's concern.
  Matrix EncodeRaw(const TokenSequence& prepared, AttentionMode mode,
                   std::size_t appended_slots) const;
  double LmLoss(const TokenSequence& tokens, std::string_view target) const;
  std::string Generate(const DecoderInput& input) const;

 private:
  std::string Call(const std::string& path, const std::string& body) const;

  BridgeConfig config_;
  std::shared_ptr<HttpTransport> transport_;
};

// Encoder backed by the bridge. Transport failures throw kTransport; a reply
// whose shape disagrees with the request or the advertised hidden size
// throws kShape.
class RemoteEncoder final : public Encoder {
 public:
  RemoteEncoder(BridgeClient client, AttentionMode mode);

  HiddenMatrix Encode(const TokenSequence& prepared,
                      std::size_t appended_slots) const override;
  std::size_t hidden_size() const override { return hidden_size_; }
  AttentionMode attention_mode() const override { return mode_; }

 private:
  BridgeClient client_;
  AttentionMode mode_;
  std::size_t hidden_size_;
};

// Decoder-side answerer that forwards the expanded input to /v1/generate.
class RemoteAnswerer final : public Answerer {
 public:
  explicit RemoteAnswerer(BridgeClient client) : client_(std::move(client)) {}

  std::string Answer(const QARecord& record,
                     const DecoderInput& input) const override;

 private:
  BridgeClient client_;
};

}  // namespace sdcc

#endif  // SDCC_BRIDGE_CLIENT_H_
