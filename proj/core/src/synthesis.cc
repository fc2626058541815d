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

#include "sdcc/synthesis.h"

#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>

#include "json.hpp"
#include "parallel.h"
#include "sdcc/error.h"

namespace sdcc {
namespace {

using nlohmann::json;

std::string_view Trim(std::string_view s) {
  const std::size_t b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  const std::size_t e = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(b, e - b + 1);
}

// Text between <tag> and </tag>, trimmed; nullopt if either is missing or
// the content is empty.
std::optional<std::string> Between(std::string_view text,
                                   std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  const std::size_t b = text.find(open);
  if (b == std::string_view::npos) return std::nullopt;
  const std::size_t start = b + open.size();
  const std::size_t e = text.find(close, start);
  if (e == std::string_view::npos) return std::nullopt;
  const std::string_view inner = Trim(text.substr(start, e - start));
  if (inner.empty()) return std::nullopt;
  return std::string(inner);
}

bool Retryable(int status) {
  return status == 0 || status == 408 || status == 429 || status >= 500;
}

std::string SummaryQuestion(TaskKind kind, Language language) {
  if (kind == TaskKind::kUltraConciseSummary) {
    return language == Language::kZh ? "请尽可能简洁地总结上述内容。"
                                     : "Summarize the context as concisely as "
                                       "possible.";
  }
  return language == Language::kZh ? "请总结上述内容。"
                                   : "Summarize the context.";
}

const PromptTemplate& ResolveTemplate(const SynthesisTask& task) {
  const PromptTemplate& t = task.prompt_template_id.empty()
                                ? DefaultTemplate(task.kind, task.language)
                                : FindTemplate(task.prompt_template_id);
  if (t.kind != task.kind) {
    throw Error(ErrorCode::kInvalidArgument,
                "template " + std::string(t.id) + " is not for " +
                    std::string(TaskKindName(task.kind)));
  }
  return t;
}

std::string FormatNumber(double v) { return json(v).dump(); }

}  // namespace

void TeacherEndpoint::Validate() const {
  if (max_concurrent < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_concurrent must be >= 1");
  }
  if (!(request_timeout_s > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "request timeout must be > 0");
  }
  if (initial_backoff_s < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "backoff must be >= 0");
  }
}

std::string_view TaskKindName(TaskKind kind) {
  switch (kind) {
    case TaskKind::kSummarization:
      return "summarization";
    case TaskKind::kSingleDocQa:
      return "single_doc_qa";
    case TaskKind::kMultiDocQa:
      return "multi_doc_qa";
    case TaskKind::kMultiHop:
      return "multi_hop";
    case TaskKind::kUltraConciseSummary:
      return "ultra_concise_summary";
  }
  return "unknown";
}

TaskKind ParseTaskKind(std::string_view name) {
  for (TaskKind k :
       {TaskKind::kSummarization, TaskKind::kSingleDocQa, TaskKind::kMultiDocQa,
        TaskKind::kMultiHop, TaskKind::kUltraConciseSummary}) {
    if (TaskKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown task kind \"" + std::string(name) + "\"");
}

std::string_view LanguageName(Language language) {
  return language == Language::kEn ? "en" : "zh";
}

Language ParseLanguage(std::string_view name) {
  if (name == "en") return Language::kEn;
  if (name == "zh") return Language::kZh;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown language \"" + std::string(name) + "\"");
}

SynthesisTask SynthesisTask::For(TaskKind kind, Language language) {
  return SynthesisTask{kind, std::string(DefaultTemplate(kind, language).id),
                       language};
}

std::string ChatRequest::ToJson() const {
  json msgs = json::array();
  for (const ChatMessage& m : messages) {
    msgs.push_back({{"role", m.role}, {"content", m.content}});
  }
  return json{
      {"model", model}, {"messages", msgs}, {"temperature", temperature}}
      .dump();
}

std::string ChatRequest::Hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : ToJson()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xF];
    h >>= 4;
  }
  return out;
}

FixtureStore FixtureStore::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  FixtureStore store;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (Trim(line).empty()) continue;
    try {
      const json obj = json::parse(line);
      store.Add(obj.at("request_hash").get<std::string>(),
                obj.at("response").get<std::string>());
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchema, path.string() + " line " +
                                          std::to_string(line_number) + ": " +
                                          e.what());
    }
  }
  return store;
}

void FixtureStore::Add(const std::string& request_hash, std::string response) {
  responses_[request_hash] = std::move(response);
}

std::optional<std::string> FixtureStore::Find(
    const std::string& request_hash) const {
  auto it = responses_.find(request_hash);
  if (it == responses_.end()) return std::nullopt;
  return it->second;
}

void FixtureStore::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& [hash, response] : responses_) {
    out << json{{"request_hash", hash}, {"response", response}}.dump() << '\n';
  }
}

TeacherClient::TeacherClient(TeacherEndpoint endpoint,
                             std::shared_ptr<HttpTransport> transport)
    : endpoint_(std::move(endpoint)),
      transport_(std::move(transport)),
      sleeper_(
          [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
  endpoint_.Validate();
  if (!transport_) {
    throw Error(ErrorCode::kInvalidArgument, "live teacher needs a transport");
  }
}

TeacherClient::TeacherClient(TeacherEndpoint endpoint, FixtureStore fixtures)
    : endpoint_(std::move(endpoint)), fixtures_(std::move(fixtures)) {
  endpoint_.Validate();
}

ChatRequest TeacherClient::MakeRequest(std::string prompt) const {
  ChatRequest request;
  request.model = endpoint_.model_name;
  request.temperature = endpoint_.temperature;
  request.messages.push_back({"user", std::move(prompt)});
  return request;
}

std::string TeacherClient::Complete(const ChatRequest& request) const {
  if (fixtures_) {
    const std::string hash = request.Hash();
    if (auto hit = fixtures_->Find(hash)) return *hit;
    throw Error(ErrorCode::kNotFound, "no fixture for request " + hash);
  }
  std::string reply = CompleteLive(request);
  if (recording_) {
    std::lock_guard<std::mutex> lock(record_mu_);
    recorded_.Add(request.Hash(), reply);
  }
  return reply;
}

FixtureStore TeacherClient::Recorded() const {
  std::lock_guard<std::mutex> lock(record_mu_);
  return recorded_;
}

std::string TeacherClient::CompleteLive(const ChatRequest& request) const {
  HttpHeaders headers = {{"Content-Type", "application/json"}};
  if (!endpoint_.auth_token_env_var.empty()) {
    const char* token = std::getenv(endpoint_.auth_token_env_var.c_str());
    if (token == nullptr || *token == '\0') {
      throw Error(ErrorCode::kFailedPrecondition,
                  "environment variable " + endpoint_.auth_token_env_var +
                      " holds no auth token");
    }
    headers["Authorization"] = std::string("Bearer ") + token;
  }
  const std::string url = JoinUrl(endpoint_.base_url, "/chat/completions");
  const std::string body = request.ToJson();
  const auto timeout = std::chrono::milliseconds(
      static_cast<long long>(endpoint_.request_timeout_s * 1000.0));

  HttpResponse last;
  std::size_t attempts = 0;
  for (std::size_t attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
    if (attempt > 0) {
      const double delay =
          endpoint_.initial_backoff_s *
          static_cast<double>(1ULL << std::min<std::size_t>(attempt - 1, 20));
      sleeper_(
          std::chrono::milliseconds(static_cast<long long>(delay * 1000.0)));
    }
    ++attempts;
    last = transport_->Post(url, body, headers, timeout);
    if (last.status >= 200 && last.status < 300) {
      try {
        const json reply = json::parse(last.body);
        return reply.at("choices")
            .at(0)
            .at("message")
            .at("content")
            .get<std::string>();
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kProtocol,
                    std::string("unexpected teacher reply: ") + e.what());
      }
    }
    if (!Retryable(last.status)) break;
  }
  throw Error(ErrorCode::kTransport,
              "teacher request failed after " + std::to_string(attempts) +
                  " attempt(s); last status " + std::to_string(last.status) +
                  (last.error.empty() ? "" : " (" + last.error + ")"));
}

void CheckSeedContext(std::string_view context, const Tokenizer& tokenizer) {
  const std::size_t n = tokenizer.Tokenize(context).size();
  if (n < kMinSeedTokens || n > kMaxSeedTokens) {
    throw Error(ErrorCode::kFailedPrecondition,
                "seed context has " + std::to_string(n) + " tokens; need " +
                    std::to_string(kMinSeedTokens) + ".." +
                    std::to_string(kMaxSeedTokens));
  }
}

std::optional<QARecord> ParseTaskOutput(TaskKind kind, std::string_view output,
                                        std::string_view context) {
  QARecord record;
  record.context = std::string(context);
  record.task = std::string(TaskKindName(kind));
  switch (kind) {
    case TaskKind::kSingleDocQa:
    case TaskKind::kMultiDocQa:
    case TaskKind::kMultiHop: {
      auto question = Between(output, "question");
      auto answer = Between(output, "answer");
      if (!question || !answer) return std::nullopt;
      record.question = std::move(*question);
      record.answers = {std::move(*answer)};
      return record;
    }
    case TaskKind::kSummarization: {
      auto summary = Between(output, "summary");
      if (!summary) return std::nullopt;
      record.answers = {std::move(*summary)};
      return record;
    }
    case TaskKind::kUltraConciseSummary: {
      const std::string_view summary = Trim(output);
      if (summary.empty()) return std::nullopt;
      record.answers = {std::string(summary)};
      return record;
    }
  }
  return std::nullopt;
}

Phase1Result SynthesizeTasks(std::string_view context,
                             std::span<const SynthesisTask> tasks,
                             const TeacherClient& teacher,
                             const Tokenizer& tokenizer,
                             std::size_t context_index) {
  CheckSeedContext(context, tokenizer);
  Phase1Result result;
  for (const SynthesisTask& task : tasks) {
    const PromptTemplate& prompt = ResolveTemplate(task);
    const std::string reply = teacher.Complete(RenderPrompt(prompt, context));
    std::optional<QARecord> record = ParseTaskOutput(task.kind, reply, context);
    if (!record) {
      result.skipped.push_back({context_index,
                                std::string(TaskKindName(task.kind)),
                                "teacher reply lacks the expected delimiters"});
      continue;
    }
    if (record->question.empty()) {
      record->question = SummaryQuestion(task.kind, task.language);
    }
    record->source = "synthetic";
    record->metadata = {
        {"template", std::string(prompt.id)},
        {"language", std::string(LanguageName(task.language))},
        {"teacher_model", teacher.endpoint().model_name},
        {"temperature", FormatNumber(teacher.endpoint().temperature)},
        {"samples", "1"},
    };
    result.records.push_back(std::move(*record));
  }
  return result;
}

Phase1Result SynthesizeTaskBatch(std::span<const std::string> contexts,
                                 std::span<const SynthesisTask> tasks,
                                 const TeacherClient& teacher,
                                 const Tokenizer& tokenizer) {
  std::vector<Phase1Result> per_context(contexts.size());
  internal::ParallelFor(
      contexts.size(), teacher.endpoint().max_concurrent, [&](std::size_t i) {
        try {
          per_context[i] =
              SynthesizeTasks(contexts[i], tasks, teacher, tokenizer, i);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kFailedPrecondition) throw;
          per_context[i].skipped.push_back({i, "*", e.what()});
        }
      });
  Phase1Result merged;
  for (Phase1Result& r : per_context) {
    for (QARecord& rec : r.records) merged.records.push_back(std::move(rec));
    for (SynthesisSkip& s : r.skipped) merged.skipped.push_back(std::move(s));
  }
  return merged;
}

ConciseSummary SynthesizeConciseSummary(std::string_view context,
                                        const TeacherClient& teacher,
                                        const Tokenizer& tokenizer,
                                        Language language) {
  CheckSeedContext(context, tokenizer);
  const PromptTemplate& prompt =
      DefaultTemplate(TaskKind::kUltraConciseSummary, language);
  const std::string reply = teacher.Complete(RenderPrompt(prompt, context));
  const std::string_view summary = Trim(reply);
  if (summary.empty()) {
    throw Error(ErrorCode::kDegenerateOutput,
                "teacher returned an empty concise summary");
  }
  ConciseSummary out;
  out.text = std::string(summary);
  out.length = tokenizer.Tokenize(out.text).size();
  out.longer_than_context = out.length > tokenizer.Tokenize(context).size();
  return out;
}

DensityDataset BuildDensityDataset(std::span<const std::string> contexts,
                                   const TeacherClient& teacher,
                                   const Tokenizer& tokenizer,
                                   Language language) {
  std::vector<std::optional<DensityRecord>> built(contexts.size());
  std::vector<std::string> failure(contexts.size());
  internal::ParallelFor(
      contexts.size(), teacher.endpoint().max_concurrent, [&](std::size_t i) {
        try {
          const ConciseSummary summary = SynthesizeConciseSummary(
              contexts[i], teacher, tokenizer, language);
          built[i] = MakeDensityRecord(tokenizer.Tokenize(contexts[i]),
                                       tokenizer.Tokenize(summary.text));
        } catch (const Error& e) {
          failure[i] = e.what();
        }
      });

  DensityDataset out;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    if (built[i]) {
      out.records.push_back(std::move(*built[i]));
      out.context_indices.push_back(i);
    } else {
      out.skipped.push_back(
          {i, std::string(TaskKindName(TaskKind::kUltraConciseSummary)),
           failure[i]});
    }
  }
  if (out.skipped.size() * 2 > contexts.size()) {
    throw Error(
        ErrorCode::kDatasetDegraded,
        std::to_string(out.skipped.size()) + " of " +
            std::to_string(contexts.size()) +
            " contexts failed; first failure: " + out.skipped.front().reason);
  }
  return out;
}

void WriteSkipManifest(const std::filesystem::path& path,
                       std::span<const SynthesisSkip> skips) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const SynthesisSkip& s : skips) {
    out << json{{"context_index", s.context_index},
                {"kind", s.kind},
                {"reason", s.reason}}
               .dump()
        << '\n';
  }
}

}  // namespace sdcc
