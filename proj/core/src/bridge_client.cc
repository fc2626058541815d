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

#include "sdcc/bridge_client.h"

#include <bit>
#include <cmath>
#include <cstring>

#include "absl/strings/escaping.h"
#include "json.hpp"
#include "sdcc/error.h"

namespace sdcc {
namespace {

using nlohmann::json;

std::string_view AttentionName(AttentionMode mode) {
  return mode == AttentionMode::kCausal ? "causal" : "bidirectional";
}

json Tokens(const TokenSequence& seq) {
  return json{{"v", kBridgeProtocolVersion}, {"tokens", seq.tokens}};
}

json ParseReply(const std::string& body) {
  try {
    json reply = json::parse(body);
    if (reply.value("v", 0) != kBridgeProtocolVersion) {
      throw Error(ErrorCode::kProtocol, "bridge protocol version mismatch");
    }
    return reply;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol,
                std::string("bad bridge reply: ") + e.what());
  }
}

std::pair<std::size_t, std::size_t> Shape(const json& reply) {
  const json& shape = reply.at("shape");
  if (!shape.is_array() || shape.size() != 2) {
    throw Error(ErrorCode::kProtocol, "bridge shape must be [rows, cols]");
  }
  return {shape[0].get<std::size_t>(), shape[1].get<std::size_t>()};
}

}  // namespace

std::string EncodeMatrixBase64(const Matrix& matrix) {
  std::string bytes;
  bytes.reserve(static_cast<std::size_t>(matrix.size()) * 4);
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      const auto bits =
          std::bit_cast<std::uint32_t>(static_cast<float>(matrix(r, c)));
      for (int k = 0; k < 4; ++k) {
        bytes.push_back(static_cast<char>((bits >> (8 * k)) & 0xFF));
      }
    }
  }
  return absl::Base64Escape(bytes);
}

Matrix DecodeMatrixBase64(std::string_view base64, std::size_t rows,
                          std::size_t cols) {
  std::string bytes;
  if (!absl::Base64Unescape(absl::string_view(base64.data(), base64.size()),
                            &bytes)) {
    throw Error(ErrorCode::kProtocol, "malformed base64 payload");
  }
  if (bytes.size() != rows * cols * 4) {
    throw Error(ErrorCode::kShape,
                "payload holds " + std::to_string(bytes.size()) +
                    " bytes, expected " + std::to_string(rows * cols * 4));
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  for (std::size_t i = 0; i < rows * cols; ++i, p += 4) {
    const std::uint32_t bits = std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 |
                               std::uint32_t{p[2]} << 16 |
                               std::uint32_t{p[3]} << 24;
    m.data()[i] = std::bit_cast<float>(bits);
  }
  return m;
}

BridgeClient::BridgeClient(BridgeConfig config,
                           std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(std::move(transport)) {
  if (!transport_) {
    throw Error(ErrorCode::kInvalidArgument, "bridge client needs a transport");
  }
}

std::string BridgeClient::Call(const std::string& path,
                               const std::string& body) const {
  const auto timeout = std::chrono::milliseconds(
      static_cast<long long>(config_.timeout_s * 1000));
  const std::string url = JoinUrl(config_.base_url, path);
  const HttpResponse r =
      body.empty()
          ? transport_->Get(url, {}, timeout)
          : transport_->Post(url, body, {{"Content-Type", "application/json"}},
                             timeout);
  if (r.status == 0) {
    throw Error(ErrorCode::kTransport,
                "bridge unreachable at " + url + ": " + r.error);
  }
  if (r.status < 200 || r.status >= 300) {
    std::string detail = r.body;
    try {
      const json err = json::parse(r.body);
      detail = err.value("error", std::string("error")) + ": " +
               err.value("message", std::string());
    } catch (const json::exception&) {
    }
    throw Error(ErrorCode::kTransport, "bridge " + path + " returned " +
                                           std::to_string(r.status) + " (" +
                                           detail + ")");
  }
  return r.body;
}

BridgeHealth BridgeClient::Health() const {
  const json reply = ParseReply(Call("/health", ""));
  try {
    BridgeHealth h;
    h.model = reply.value("model", std::string());
    h.hidden_size = reply.at("hidden_size").get<std::size_t>();
    if (const auto caps = reply.find("capabilities"); caps != reply.end()) {
      h.can_encode = caps->value("encode", true);
      h.can_lm_loss = caps->value("lm_loss", true);
      h.can_generate = caps->value("generate", false);
    }
    return h;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol,
                std::string("bad health reply: ") + e.what());
  }
}

Matrix BridgeClient::EncodeRaw(const TokenSequence& prepared,
                               AttentionMode mode,
                               std::size_t appended_slots) const {
  json req = Tokens(prepared);
  req["attention_mode"] = AttentionName(mode);
  req["appended_slots"] = appended_slots;
  const json reply = ParseReply(Call("/v1/encode", req.dump()));
  try {
    const auto [rows, cols] = Shape(reply);
    return DecodeMatrixBase64(reply.at("data").get<std::string>(), rows, cols);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol,
                std::string("bad encode reply: ") + e.what());
  }
}

double BridgeClient::LmLoss(const TokenSequence& tokens,
                            std::string_view target) const {
  json req = Tokens(tokens);
  req["target"] = target;
  const json reply = ParseReply(Call("/v1/lm_loss", req.dump()));
  try {
    const double loss = reply.at("loss").get<double>();
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kProtocol, "bridge returned a non-finite loss");
    }
    return loss;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol,
                std::string("bad lm_loss reply: ") + e.what());
  }
}

std::string BridgeClient::Generate(const DecoderInput& input) const {
  json req = Tokens(input.tokens);
  req["override_span"] = {input.span_start, input.span_length};
  req["shape"] = {input.override_embeddings.rows(),
                  input.override_embeddings.cols()};
  req["latents"] = EncodeMatrixBase64(input.override_embeddings);
  const json reply = ParseReply(Call("/v1/generate", req.dump()));
  try {
    return reply.at("text").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kProtocol,
                std::string("bad generate reply: ") + e.what());
  }
}

RemoteEncoder::RemoteEncoder(BridgeClient client, AttentionMode mode)
    : client_(std::move(client)), mode_(mode) {
  const BridgeHealth health = client_.Health();
  if (!health.can_encode) {
    throw Error(ErrorCode::kFailedPrecondition, "bridge cannot encode");
  }
  if (health.hidden_size == 0) {
    throw Error(ErrorCode::kProtocol, "bridge reports hidden_size 0");
  }
  hidden_size_ = health.hidden_size;
}

HiddenMatrix RemoteEncoder::Encode(const TokenSequence& prepared,
                                   std::size_t appended_slots) const {
  const std::size_t expected_rows = prepared.size() + appended_slots;
  HiddenMatrix out;
  out.data = client_.EncodeRaw(prepared, mode_, appended_slots);
  if (out.rows() != expected_rows || out.hidden_size() != hidden_size_) {
    throw Error(ErrorCode::kShape,
                "bridge returned " + std::to_string(out.rows()) + "x" +
                    std::to_string(out.hidden_size()) + ", expected " +
                    std::to_string(expected_rows) + "x" +
                    std::to_string(hidden_size_));
  }
  out.roles.assign(expected_rows, PositionRole::kContent);
  if (!prepared.empty() && prepared.tokens.back() == kSentinelId) {
    out.roles[prepared.size() - 1] = PositionRole::kSentinel;
  }
  for (std::size_t i = prepared.size(); i < expected_rows; ++i) {
    out.roles[i] = PositionRole::kCompressionSlot;
  }
  out.Validate();
  return out;
}

std::string RemoteAnswerer::Answer(const QARecord&,
                                   const DecoderInput& input) const {
  return client_.Generate(input);
}

}  // namespace sdcc
