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

#include "sdcc/config.h"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "sdcc/error.h"

namespace sdcc {
namespace {

template <typename T>
void Read(const YAML::Node& node, const char* key, T& out) {
  const YAML::Node value = node[key];
  if (!value) return;
  try {
    out = value.as<T>();
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kSchema,
                std::string("config key \"") + key + "\": " + e.what());
  }
}

TeacherEndpoint ParseEndpoint(const YAML::Node& node) {
  TeacherEndpoint t;
  if (!node.IsMap()) {
    throw Error(ErrorCode::kSchema, "teacher endpoint must be a mapping");
  }
  Read(node, "base_url", t.base_url);
  Read(node, "model", t.model_name);
  Read(node, "auth_token_env", t.auth_token_env_var);
  Read(node, "max_retries", t.max_retries);
  Read(node, "timeout_s", t.request_timeout_s);
  Read(node, "max_concurrent", t.max_concurrent);
  Read(node, "temperature", t.temperature);
  Read(node, "initial_backoff_s", t.initial_backoff_s);
  t.Validate();
  return t;
}

YAML::Node ParseYaml(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw Error(ErrorCode::kSchema, std::string("config: ") + e.what());
  }
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

ToolkitConfig ParseConfig(std::string_view yaml_text) {
  const YAML::Node root = ParseYaml(yaml_text);
  ToolkitConfig c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap())
    throw Error(ErrorCode::kSchema, "config must be a mapping");

  if (const YAML::Node e = root["encoder"]) {
    Read(e, "hidden_size", c.encoder.hidden_size);
    Read(e, "layers", c.encoder.layers);
    Read(e, "mix_window", c.encoder.mix_window);
    Read(e, "seed", c.encoder.seed);
    std::string attention;
    Read(e, "attention", attention);
    if (attention == "causal") {
      c.encoder.attention = AttentionMode::kCausal;
    } else if (attention == "bidirectional") {
      c.encoder.attention = AttentionMode::kBidirectional;
    } else if (!attention.empty()) {
      throw Error(ErrorCode::kSchema, "unknown attention mode " + attention);
    }
    c.encoder.Validate();
  }
  if (const YAML::Node d = root["drs"]) {
    if (d["ratios"]) {
      std::vector<double> v;
      Read(d, "ratios", v);
      c.ratios = RatioCandidates(std::move(v));
    }
    if (d["lengths"]) {
      std::vector<std::size_t> v;
      Read(d, "lengths", v);
      c.lengths = LengthCandidates(std::move(v));
    }
  }
  if (const YAML::Node p = root["projector"]) {
    Read(p, "intermediate_size", c.projector_intermediate);
    Read(p, "output_size", c.projector_output);
    Read(p, "seed", c.projector_seed);
  }
  if (const YAML::Node l = root["loss"]) {
    Read(l, "lambda", c.lambda);
    if (c.lambda < 0.0) throw Error(ErrorCode::kSchema, "lambda must be >= 0");
  }
  if (const YAML::Node t = root["training"]) {
    Read(t, "ratio_randomization", c.ratio_randomization);
    Read(t, "seed", c.training_seed);
  }
  if (const YAML::Node s = root["sampling"]) Read(s, "seed", c.sampling_seed);
  if (const YAML::Node t = root["teacher"]) c.teacher = ParseEndpoint(t);
  if (const YAML::Node b = root["bridge"]) {
    BridgeConfig bridge;
    Read(b, "base_url", bridge.base_url);
    Read(b, "timeout_s", bridge.timeout_s);
    c.bridge = bridge;
  }
  return c;
}

ToolkitConfig LoadConfig(const std::filesystem::path& path) {
  return ParseConfig(Slurp(path));
}

TeacherEndpoint LoadEndpoint(std::string_view spec) {
  std::string path(spec);
  std::string section = "teacher";
  if (const std::size_t hash = path.rfind('#'); hash != std::string::npos) {
    section = path.substr(hash + 1);
    path.resize(hash);
  }
  const YAML::Node root = ParseYaml(Slurp(path));
  const YAML::Node node = root.IsMap() ? root[section] : YAML::Node();
  if (!node) {
    throw Error(ErrorCode::kNotFound,
                "no section \"" + section + "\" in " + path);
  }
  return ParseEndpoint(node);
}

}  // namespace sdcc
