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
#include "govgw/gateway/http.hpp"

#include <httplib.h>

#include <regex>
#include <thread>

#include <json.hpp>

#include "govgw/common/error.hpp"
#include "govgw/common/time.hpp"
#include "govgw/gateway/forwarder.hpp"

namespace govgw::gateway {

struct HttpServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
};

namespace {

httplib::Server::Handler adapt(HttpHandler handler) {
  return [handler = std::move(handler)](const httplib::Request& req, httplib::Response& res) {
    HttpRequest in;
    in.method = req.method;
    in.path = req.path;
    in.body = req.body;
    in.remote_addr = req.remote_addr;
    for (const auto& [k, v] : req.headers) in.headers[k] = v;
    for (std::size_t i = 1; i < req.matches.size(); ++i) in.captures.push_back(req.matches[i]);
    HttpReply out;
    try {
      out = handler(in);
    } catch (const Error& e) {
      out.status = 500;
      out.body = nlohmann::json{{"error", to_string(e.code())}, {"detail", e.detail()}}.dump();
    } catch (const std::exception& e) {
      out.status = 500;
      out.body = nlohmann::json{{"error", "Internal"}, {"detail", e.what()}}.dump();
    }
    res.status = out.status;
    for (const auto& [k, v] : out.headers) res.set_header(k, v);
    res.set_content(out.body, out.content_type);
  };
}

struct Url {
  std::string host;
  int port = 80;
  std::string path = "/";
};

Url parse_url(const std::string& url) {
  static const std::regex re(R"(^http://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw Error(Errc::kInvalidArgument, "unsupported url " + url);
  Url out;
  out.host = m[1];
  if (m[2].matched) out.port = std::stoi(m[2]);
  if (m[3].matched) out.path = m[3];
  return out;
}

HttpReply to_reply(const httplib::Result& r, const std::string& url) {
  if (!r) throw Error(Errc::kIoError, url + ": " + httplib::to_string(r.error()));
  HttpReply out;
  out.status = r->status;
  out.body = r->body;
  out.content_type = r->get_header_value("Content-Type");
  for (const auto& [k, v] : r->headers) out.headers[k] = v;
  return out;
}

}  // namespace

HttpServer::HttpServer() : impl_(std::make_unique<Impl>()) {}

HttpServer::~HttpServer() { stop(); }

void HttpServer::post(const std::string& pattern, HttpHandler handler) {
  impl_->server.Post(pattern, adapt(std::move(handler)));
}

void HttpServer::get(const std::string& pattern, HttpHandler handler) {
  impl_->server.Get(pattern, adapt(std::move(handler)));
}

int HttpServer::start(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                        : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error(Errc::kIoError, "cannot bind " + host + ":" + std::to_string(port));
  impl_->port = bound;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::port() const { return impl_->port; }

HttpReply http_post(const std::string& url, const std::string& body, const Headers& headers,
                    const std::string& content_type) {
  Url u = parse_url(url);
  httplib::Client cli(u.host, u.port);
  cli.set_connection_timeout(5);
  cli.set_read_timeout(30);
  httplib::Headers h;
  for (const auto& [k, v] : headers) {
    if (k != "Content-Length" && k != "Content-Type" && k != "Host") h.emplace(k, v);
  }
  return to_reply(cli.Post(u.path, h, body, content_type), url);
}

HttpReply http_get(const std::string& url) {
  Url u = parse_url(url);
  httplib::Client cli(u.host, u.port);
  cli.set_connection_timeout(5);
  return to_reply(cli.Get(u.path), url);
}

ProviderResponse HttpForwarder::forward(const std::string& target, const GatewayMessage& message) {
  auto ct = message.headers.find("Content-Type");
  Headers headers = message.headers;
  headers["X-Govgw-Message-Id"] = std::to_string(message.message_id);
  HttpReply r = http_post(target, message.body, headers,
                          ct == message.headers.end() ? "application/octet-stream" : ct->second);
  return {r.status, r.body};
}

void mount_gateway(HttpServer& server, Gateway& gateway, std::optional<std::string> secret) {
  server.post(R"(/gw/(.+))", [&gateway, secret](const HttpRequest& req) {
    HttpReply out;
    if (secret) {
      auto it = req.headers.find("X-VMS-Secret");
      if (it == req.headers.end() || it->second != *secret) {
        out.status = 401;
        out.body = R"({"error":"Unauthorized","detail":"missing or wrong X-VMS-Secret"})";
        return out;
      }
    }
    GatewayMessage m;
    m.headers = req.headers;
    m.body = req.body;
    auto header = [&](const char* name) {
      auto it = req.headers.find(name);
      return it == req.headers.end() ? std::string() : it->second;
    };
    m.context.subject = header("X-Subject");
    m.context.action = header("X-Action");
    m.context.resource = header("X-Resource");
    m.context.timestamp = header("X-Timestamp");
    if (m.context.timestamp.empty()) {
      m.context.timestamp = format_iso8601(std::chrono::system_clock::now());
    }
    m.context.client_address = req.remote_addr;
    Response r = gateway.process(req.captures.at(0), std::move(m));
    out.status = r.status;
    out.headers["X-Govgw-Message-Id"] = std::to_string(r.message_id);
    out.headers["X-Govgw-Pipeline-Version"] = std::to_string(r.pipeline_version);
    if (r.error.empty()) {
      out.body = r.body;
      out.content_type = "text/plain";
    } else {
      out.body = nlohmann::json{{"error", r.error}, {"detail", r.body}}.dump();
    }
    return out;
  });
}

}  // namespace govgw::gateway
