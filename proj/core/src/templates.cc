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

// Prompt templates for the teacher model. These are versioned assets: edit
// the text only together with a new id, since fixture hashes cover it.

#include <array>
#include <string>

#include "sdcc/error.h"
#include "sdcc/synthesis.h"

namespace sdcc {
namespace {

constexpr std::array<PromptTemplate, 10> kTemplates = {{
    {"p1.summarization.en.v1", TaskKind::kSummarization, Language::kEn,
     "Summarize the following text in one short paragraph.\n"
     "Reply exactly in the form <summary>...</summary>.\n\n"
     "Text:\n{context}"},
    {"p1.single_doc_qa.en.v1", TaskKind::kSingleDocQa, Language::kEn,
     "Read the document below and write one question that can be answered "
     "from it, followed by a short answer copied or condensed from the "
     "document.\nReply exactly in the form "
     "<question>...</question><answer>...</answer>.\n\n"
     "Document:\n{context}"},
    {"p1.multi_doc_qa.en.v1", TaskKind::kMultiDocQa, Language::kEn,
     "The text below may contain several passages. Write one question whose "
     "answer needs information from more than one passage, followed by a "
     "short answer.\nReply exactly in the form "
     "<question>...</question><answer>...</answer>.\n\n"
     "Passages:\n{context}"},
    {"p1.multi_hop.en.v1", TaskKind::kMultiHop, Language::kEn,
     "Write one question about the text below that can only be answered by "
     "combining at least two separate facts from it, followed by a short "
     "answer.\nReply exactly in the form "
     "<question>...</question><answer>...</answer>.\n\n"
     "Text:\n{context}"},
    {"p2.ultra_concise_summary.en.v1", TaskKind::kUltraConciseSummary,
     Language::kEn,
     "Summarize the following text as concisely as possible. Keep every "
     "piece of information but omit all redundant words. Reply with the "
     "summary only.\n\nText:\n{context}"},
    {"p1.summarization.zh.v1", TaskKind::kSummarization, Language::kZh,
     "请用一段简短的话总结下面的文本。\n"
     "严格按照 <summary>...</summary> 的格式回答。\n\n文本：\n{context}"},
    {"p1.single_doc_qa.zh.v1", TaskKind::kSingleDocQa, Language::kZh,
     "阅读下面的文档，提出一个可以根据文档回答的问题，并给出简短的答案。\n"
     "严格按照 <question>...</question><answer>...</answer> 的格式回答。\n\n"
     "文档：\n{context}"},
    {"p1.multi_doc_qa.zh.v1", TaskKind::kMultiDocQa, Language::kZh,
     "下面的文本可能包含多个段落。提出一个需要综合多个段落信息才能回答的问题，"
     "并给出简短的答案。\n"
     "严格按照 <question>...</question><answer>...</answer> 的格式回答。\n\n"
     "段落：\n{context}"},
    {"p1.multi_hop.zh.v1", TaskKind::kMultiHop, Language::kZh,
     "针对下面的文本提出一个问题，要求必须结合文本中至少两个不同的事实才能回答"
     "，"
     "并给出简短的答案。\n"
     "严格按照 <question>...</question><answer>...</answer> 的格式回答。\n\n"
     "文本：\n{context}"},
    {"p2.ultra_concise_summary.zh.v1", TaskKind::kUltraConciseSummary,
     Language::kZh,
     "请尽可能简洁地总结下面的文本，保留全部信息，但删去所有冗余的词语。"
     "只输出总结内容。\n\n文本：\n{context}"},
}};

}  // namespace

std::span<const PromptTemplate> PromptTemplates() { return kTemplates; }

const PromptTemplate& FindTemplate(std::string_view id) {
  for (const PromptTemplate& t : kTemplates) {
    if (t.id == id) return t;
  }
  throw Error(ErrorCode::kNotFound,
              "unknown prompt template \"" + std::string(id) + "\"");
}

const PromptTemplate& DefaultTemplate(TaskKind kind, Language language) {
  for (const PromptTemplate& t : kTemplates) {
    if (t.kind == kind && t.language == language) return t;
  }
  throw Error(ErrorCode::kNotFound, "no template for " +
                                        std::string(TaskKindName(kind)) + "/" +
                                        std::string(LanguageName(language)));
}

std::string RenderPrompt(const PromptTemplate& prompt,
                         std::string_view context) {
  constexpr std::string_view kSlot = "{context}";
  std::string out(prompt.text);
  const std::size_t at = out.find(kSlot);
  if (at == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "template " + std::string(prompt.id) + " has no {context}");
  }
  out.replace(at, kSlot.size(), context);
  return out;
}

}  // namespace sdcc
