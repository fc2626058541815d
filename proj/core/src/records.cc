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

#include "sdcc/records.h"

#include <fstream>
#include <string>

#include "json.hpp"
#include "sdcc/error.h"

namespace sdcc {
namespace {

using nlohmann::json;

[[noreturn]] void SchemaError(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kSchema, "line " + std::to_string(line) + ": " + what);
}

const json& RequireField(const json& obj, const char* name, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    SchemaError(line, std::string("missing field \"") + name + "\"");
  }
  return *it;
}

std::string RequireString(const json& obj, const char* name, std::size_t line) {
  const json& value = RequireField(obj, name, line);
  if (!value.is_string()) {
    SchemaError(line, std::string("field \"") + name + "\" must be a string");
  }
  return value.get<std::string>();
}

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

QARecord ParseRecordLine(std::string_view line, std::size_t line_number) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    SchemaError(line_number, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) SchemaError(line_number, "expected a JSON object");

  QARecord record;
  record.context = RequireString(obj, "context", line_number);
  if (record.context.empty()) {
    SchemaError(line_number, "field \"context\" must be non-empty");
  }
  record.question = RequireString(obj, "question", line_number);

  const json& answers = RequireField(obj, "answers", line_number);
  if (!answers.is_array() || answers.empty()) {
    SchemaError(line_number, "field \"answers\" must be a non-empty array");
  }
  for (const json& a : answers) {
    if (!a.is_string()) {
      SchemaError(line_number, "field \"answers\" must hold strings");
    }
    record.answers.push_back(a.get<std::string>());
  }

  if (auto it = obj.find("source"); it != obj.end() && it->is_string()) {
    record.source = it->get<std::string>();
  }
  if (auto it = obj.find("task"); it != obj.end() && it->is_string()) {
    record.task = it->get<std::string>();
  }
  if (auto it = obj.find("metadata"); it != obj.end() && it->is_object()) {
    for (const auto& [key, value] : it->items()) {
      record.metadata[key] =
          value.is_string() ? value.get<std::string>() : value.dump();
    }
  }
  return record;
}

std::string FormatRecordLine(const QARecord& record) {
  json obj = {{"context", record.context},
              {"question", record.question},
              {"answers", record.answers},
              {"source", record.source}};
  if (!record.task.empty()) obj["task"] = record.task;
  if (!record.metadata.empty()) obj["metadata"] = record.metadata;
  return obj.dump();
}

std::vector<QARecord> LoadRecords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  }
  std::vector<QARecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    records.push_back(ParseRecordLine(line, line_number));
  }
  return records;
}

void WriteRecords(const std::filesystem::path& path,
                  const std::vector<QARecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const QARecord& r : records) out << FormatRecordLine(r) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace sdcc
