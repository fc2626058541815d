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

// Two-phase synthetic data generation through a chat-completion teacher.
//
// Phase 1 turns seed contexts into summarization and QA training tasks.
// Phase 2 asks for ultra-concise summaries; their token counts become the
// density labels. A FixtureStore replays recorded teacher responses keyed by
// request hash, which keeps tests and offline runs hermetic.

#ifndef SDCC_SYNTHESIS_H_
#define SDCC_SYNTHESIS_H_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdcc/density.h"
#include "sdcc/http_transport.h"
#include "sdcc/records.h"
#include "sdcc/tokenizer.h"

namespace sdcc {

inline constexpr std::size_t kMinSeedTokens = 128;
inline constexpr std::size_t kMaxSeedTokens = 1300;

struct TeacherEndpoint {
  std::string base_url;  // e.g. "http://localhost:8000/v1"
  std::string model_name;
  std::string auth_token_env_var;  // empty: no Authorization header
  std::size_t max_retries = 3;
  double request_timeout_s = 60.0;
  std::size_t max_concurrent = 4;
  double temperature = 0.7;
  double initial_backoff_s = 0.5;

  void Validate() const;
};

enum class TaskKind {
  kSummarization,
  kSingleDocQa,
  kMultiDocQa,
  kMultiHop,
  kUltraConciseSummary,
};

enum class Language { kEn, kZh };

std::string_view TaskKindName(TaskKind kind);
TaskKind ParseTaskKind(std::string_view name);
std::string_view LanguageName(Language language);
Language ParseLanguage(std::string_view name);

struct PromptTemplate {
  std::string_view id;
  TaskKind kind;
  Language language;
  std::string_view text;  // "{context}" marks the insertion point
};

std::span<const PromptTemplate> PromptTemplates();
const PromptTemplate& FindTemplate(std::string_view id);
const PromptTemplate& DefaultTemplate(TaskKind kind, Language language);
std::string RenderPrompt(const PromptTemplate& prompt,
                         std::string_view context);

struct SynthesisTask {
  TaskKind kind = TaskKind::kSingleDocQa;
  std::string prompt_template_id;
  Language language = Language::kEn;

  static SynthesisTask For(TaskKind kind, Language language = Language::kEn);
};

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.7;

  // Compact JSON body: {"messages": [...], "model": ..., "temperature": ...}
  std::string ToJson() const;
  // FNV-1a 64 of ToJson(), 16 lowercase hex digits.
  std::string Hash() const;
};

// JSONL of {"request_hash": hex, "response": str}.
class FixtureStore {
 public:
  static FixtureStore Load(const std::filesystem::path& path);

  void Add(const std::string& request_hash, std::string response);
  std::optional<std::string> Find(const std::string& request_hash) const;
  void Save(const std::filesystem::path& path) const;
  std::size_t size() const { return responses_.size(); }

 private:
  std::map<std::string, std::string> responses_;
};

class TeacherClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  // Live mode: requests go through `transport` with retry and exponential
  // backoff, at most max_retries + 1 attempts per request.
  TeacherClient(TeacherEndpoint endpoint,
                std::shared_ptr<HttpTransport> transport);
  // Playback mode: every request is answered from `fixtures`; the transport
  // is never touched. A missing fixture throws kNotFound.
  TeacherClient(TeacherEndpoint endpoint, FixtureStore fixtures);

  ChatRequest MakeRequest(std::string prompt) const;
  std::string Complete(const ChatRequest& request) const;
  std::string Complete(std::string prompt) const {
    return Complete(MakeRequest(std::move(prompt)));
  }

  // Live responses are also copied into an internal store for Save().
  void EnableRecording() { recording_ = true; }
  FixtureStore Recorded() const;

  void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }
  const TeacherEndpoint& endpoint() const { return endpoint_; }
  bool playback() const { return fixtures_.has_value(); }

 private:
  std::string CompleteLive(const ChatRequest& request) const;

  TeacherEndpoint endpoint_;
  std::shared_ptr<HttpTransport> transport_;
  std::optional<FixtureStore> fixtures_;
  Sleeper sleeper_;
  bool recording_ = false;
  mutable std::mutex record_mu_;
  mutable FixtureStore recorded_;
};

struct SynthesisSkip {
  std::size_t context_index = 0;
  std::string kind;
  std::string reason;
};

// Throws kFailedPrecondition unless the context has between kMinSeedTokens
// and kMaxSeedTokens tokens.
void CheckSeedContext(std::string_view context, const Tokenizer& tokenizer);

// Parses a teacher reply for `kind`. QA kinds expect
// <question>...</question><answer>...</answer>, summarization expects
// <summary>...</summary> and the ultra-concise reply is plain text. Returns
// nullopt when the delimiters are missing or the content is empty.
std::optional<QARecord> ParseTaskOutput(TaskKind kind, std::string_view output,
                                        std::string_view context);

struct Phase1Result {
  std::vector<QARecord> records;
  std::vector<SynthesisSkip> skipped;
};

// One record per task, source "synthetic". Replies that fail the delimiter
// format are skipped and listed; transport failures throw.
Phase1Result SynthesizeTasks(std::string_view context,
                             std::span<const SynthesisTask> tasks,
                             const TeacherClient& teacher,
                             const Tokenizer& tokenizer,
                             std::size_t context_index = 0);

// Runs SynthesizeTasks over many contexts with up to max_concurrent
// requests in flight. Output order follows input order. Contexts that fail
// the length precondition are skipped.
Phase1Result SynthesizeTaskBatch(std::span<const std::string> contexts,
                                 std::span<const SynthesisTask> tasks,
                                 const TeacherClient& teacher,
                                 const Tokenizer& tokenizer);

struct ConciseSummary {
  std::string text;
  std::size_t length = 0;            // tokens under the active tokenizer
  bool longer_than_context = false;  // label will be negative
};

// Whitespace-only replies throw kDegenerateOutput.
ConciseSummary SynthesizeConciseSummary(std::string_view context,
                                        const TeacherClient& teacher,
                                        const Tokenizer& tokenizer,
                                        Language language = Language::kEn);

struct DensityDataset {
  std::vector<DensityRecord> records;
  std::vector<std::size_t> context_indices;  // source index per record
  std::vector<SynthesisSkip> skipped;
};

// Failed contexts are skipped and listed. More than half skipped throws
// kDatasetDegraded.
DensityDataset BuildDensityDataset(std::span<const std::string> contexts,
                                   const TeacherClient& teacher,
                                   const Tokenizer& tokenizer,
                                   Language language = Language::kEn);

void WriteSkipManifest(const std::filesystem::path& path,
                       std::span<const SynthesisSkip> skips);

}  // namespace sdcc

#endif  // SDCC_SYNTHESIS_H_
