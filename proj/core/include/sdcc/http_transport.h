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

#ifndef SDCC_HTTP_TRANSPORT_H_
#define SDCC_HTTP_TRANSPORT_H_

#include <chrono>
#include <map>
#include <string>

namespace sdcc {

struct HttpResponse {
  int status = 0;  // 0 means no response (connect failure, timeout)
  std::string body;
  std::string error;  // transport-level description when status == 0
};

using HttpHeaders = std::map<std::string, std::string>;

// Minimal blocking HTTP client surface. Implementations must be safe to call
// from several threads at once.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;

  virtual HttpResponse Post(const std::string& url, const std::string& body,
                            const HttpHeaders& headers,
                            std::chrono::milliseconds timeout) = 0;
  virtual HttpResponse Get(const std::string& url, const HttpHeaders& headers,
                           std::chrono::milliseconds timeout) = 0;
};

// cpp-httplib backed transport; opens a fresh connection per request.
// URLs are absolute ("http://host:port/path" or "https://...").
class HttplibTransport final : public HttpTransport {
 public:
  HttpResponse Post(const std::string& url, const std::string& body,
                    const HttpHeaders& headers,
                    std::chrono::milliseconds timeout) override;
  HttpResponse Get(const std::string& url, const HttpHeaders& headers,
                   std::chrono::milliseconds timeout) override;
};

// Joins a base URL and a path with exactly one slash between them.
std::string JoinUrl(const std::string& base, const std::string& path);

}  // namespace sdcc

#endif  // SDCC_HTTP_TRANSPORT_H_
