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

#ifndef SDCC_RECORDS_H_
#define SDCC_RECORDS_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sdcc {

// One reading-comprehension instance. The JSONL schema is shared by the
// evaluation benchmarks and by synthesized training tasks:
//   {"context": str, "question": str, "answers": [str], "source": str}
// plus optional "task" and "metadata" (object of strings).
struct QARecord {
  std::string context;
  std::string question;
  std::vector<std::string> answers;
  std::string source;
  std::string task;
  std::map<std::string, std::string> metadata;

  friend bool operator==(const QARecord&, const QARecord&) = default;
};

// Parses one JSONL line. line_number is only used in error messages.
QARecord ParseRecordLine(std::string_view line, std::size_t line_number);
std::string FormatRecordLine(const QARecord& record);

// Blank lines are skipped. Throws kNotFound for a missing file and kSchema
// naming the 1-based line and field for malformed input.
std::vector<QARecord> LoadRecords(const std::filesystem::path& path);
void WriteRecords(const std::filesystem::path& path,
                  const std::vector<QARecord>& records);

}  // namespace sdcc

#endif  // SDCC_RECORDS_H_
