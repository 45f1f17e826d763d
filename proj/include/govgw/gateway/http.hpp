// Copyright 2026 The govgw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef GOVGW_GATEWAY_HTTP_HPP_
#define GOVGW_GATEWAY_HTTP_HPP_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "govgw/gateway/gateway.hpp"
#include "govgw/gateway/message.hpp"

namespace govgw::gateway {

struct HttpRequest {
  std::string method;
  std::string path;
  std::string body;
  std::string remote_addr;
  Headers headers;
  std::vector<std::string> captures;  // regex groups of the matched pattern
};

struct HttpReply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
  Headers headers;
};

using HttpHandler = std::function<HttpReply(const HttpRequest&)>;

// Small threaded HTTP/1.1 server. Handlers are matched by full-path regex.
class HttpServer {
 public:
  HttpServer();
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  void post(const std::string& pattern, HttpHandler handler);
  void get(const std::string& pattern, HttpHandler handler);

  // Binds (port 0 picks a free one) and serves on a background thread.
  // Returns the bound port; throws kIoError if binding fails.
  int start(const std::string& host, int port);
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot HTTP client call. Throws kIoError on connection failure.
HttpReply http_post(const std::string& url, const std::string& body, const Headers& headers = {},
                    const std::string& content_type = "application/octet-stream");
HttpReply http_get(const std::string& url);

// Wires "POST /gw/<route>" to the gateway. Context is taken from the
// X-Subject, X-Action, X-Resource and X-Timestamp headers; the client
// address is the peer address. With a shared secret set, requests must
// carry it in X-VMS-Secret.
void mount_gateway(HttpServer& server, Gateway& gateway,
                   std::optional<std::string> shared_secret = std::nullopt);

}  // namespace govgw::gateway

#endif  // GOVGW_GATEWAY_HTTP_HPP_
