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

#include "sdcc/http_transport.h"

#include <string>

#include "httplib.h"
#include "sdcc/error.h"

namespace sdcc {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl Split(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "URL needs a scheme: " + url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

void Configure(httplib::Client& client, std::chrono::milliseconds timeout) {
  const auto sec = static_cast<time_t>(timeout.count() / 1000);
  const auto usec = static_cast<time_t>((timeout.count() % 1000) * 1000);
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);
}

HttpResponse Convert(const httplib::Result& result) {
  HttpResponse out;
  if (!result) {
    out.error = httplib::to_string(result.error());
    return out;
  }
  out.status = result->status;
  out.body = result->body;
  return out;
}

httplib::Headers ToHeaders(const HttpHeaders& headers) {
  httplib::Headers out;
  for (const auto& [k, v] : headers) out.emplace(k, v);
  return out;
}

}  // namespace

HttpResponse HttplibTransport::Post(const std::string& url,
                                    const std::string& body,
                                    const HttpHeaders& headers,
                                    std::chrono::milliseconds timeout) {
  const SplitUrl parts = Split(url);
  httplib::Client client(parts.origin);
  Configure(client, timeout);
  return Convert(
      client.Post(parts.path, ToHeaders(headers), body, "application/json"));
}

HttpResponse HttplibTransport::Get(const std::string& url,
                                   const HttpHeaders& headers,
                                   std::chrono::milliseconds timeout) {
  const SplitUrl parts = Split(url);
  httplib::Client client(parts.origin);
  Configure(client, timeout);
  return Convert(client.Get(parts.path, ToHeaders(headers)));
}

std::string JoinUrl(const std::string& base, const std::string& path) {
  std::string out = base;
  while (!out.empty() && out.back() == '/') out.pop_back();
  if (path.empty() || path.front() != '/') out.push_back('/');
  return out + path;
}

}  // namespace sdcc
