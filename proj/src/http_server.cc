// Copyright 2026 The memassist Authors. All rights reserved.
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

#include "memassist/http_server.h"

#include <sys/socket.h>

#include <atomic>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <condition_variable>
#include <list>
#include <mutex>
#include <thread>

namespace memassist {
namespace {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

using Request = http::request<http::string_body>;
using Response = http::response<http::string_body>;

constexpr std::string_view kSessionsPrefix = "/sessions/";
constexpr std::string_view kEventsSuffix = "/events";

Response JsonResponse(const Request& req, http::status status,
                      const nlohmann::json& body) {
  Response res{status, req.version()};
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

Response ErrorResponse(const Request& req, http::status status,
                       std::string_view code, const std::string& message) {
  return JsonResponse(req, status,
                      {{"schema_version", kWireSchemaVersion},
                       {"error", {{"code", code}, {"message", message}}}});
}

// "/sessions/{id}/events" -> id, or empty.
std::string EventsSessionId(std::string_view target) {
  if (!target.starts_with(kSessionsPrefix) || !target.ends_with(kEventsSuffix)) return {};
  target.remove_prefix(kSessionsPrefix.size());
  target.remove_suffix(kEventsSuffix.size());
  if (target.empty() || target.find('/') != std::string_view::npos) return {};
  return std::string(target);
}

}  // namespace

struct HttpServer::Impl {
  struct Connection {
    std::shared_ptr<tcp::socket> socket;
    std::thread thread;
    std::atomic<bool> done{false};
  };

  SessionManager* sessions;
  PolicyCatalog* catalog;
  ServerOptions opts;
  asio::io_context io;
  std::unique_ptr<tcp::acceptor> acceptor;
  std::thread accept_thread;
  std::atomic<bool> stopping{false};
  std::mutex mu;
  std::condition_variable stopped_cv;
  bool stopped = false;
  std::list<Connection> connections;

  Response Route(const Request& req) {
    const std::string_view target(req.target().data(), req.target().size());
    if (req.method() == http::verb::options) {
      Response res{http::status::no_content, req.version()};
      res.set(http::field::access_control_allow_origin, "*");
      res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
      res.set(http::field::access_control_allow_headers, "Content-Type");
      res.keep_alive(req.keep_alive());
      res.prepare_payload();
      return res;
    }
    if (target == "/sessions") {
      if (req.method() != http::verb::post) {
        return ErrorResponse(req, http::status::method_not_allowed, "method_not_allowed",
                             "use POST");
      }
      return CreateSession(req);
    }
    if (target == "/policies") {
      if (req.method() != http::verb::get) {
        return ErrorResponse(req, http::status::method_not_allowed, "method_not_allowed",
                             "use GET");
      }
      nlohmann::json list = nlohmann::json::array();
      for (const PolicyEntry& e : catalog->List()) list.push_back(PolicyEntryToJson(e));
      return JsonResponse(req, http::status::ok,
                          {{"schema_version", kWireSchemaVersion}, {"policies", list}});
    }
    if (const std::string id = EventsSessionId(target); !id.empty()) {
      if (!sessions->Find(id)) {
        return ErrorResponse(req, http::status::not_found, "unknown_session", id);
      }
      return ErrorResponse(req, http::status::upgrade_required, "upgrade_required",
                           "open this path as a WebSocket");
    }
    return ErrorResponse(req, http::status::not_found, "not_found",
                         std::string(target));
  }

  Response CreateSession(const Request& req) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body());
    } catch (const nlohmann::json::exception& e) {
      return ErrorResponse(req, http::status::bad_request, "bad_request", e.what());
    }
    try {
      auto [session, frames] = sessions->Create(SessionRequestFromJson(body));
      return JsonResponse(req, http::status::created,
                          {{"schema_version", kWireSchemaVersion},
                           {"session_id", session->id()},
                           {"frames", frames}});
    } catch (const SessionError& e) {
      const bool unknown = e.code() == SessionError::Code::kUnknownPolicy;
      return ErrorResponse(req, unknown ? http::status::not_found : http::status::bad_request,
                           unknown ? "unknown_policy" : "bad_request", e.what());
    }
  }

  void ServeWebSocket(tcp::socket& socket, const Request& req,
                      std::shared_ptr<Session> session) {
    websocket::stream<tcp::socket&> ws(socket);
    ws.accept(req);
    ws.text(true);
    auto send = [&ws](const Session::Frames& frames) {
      for (const auto& f : frames) ws.write(asio::buffer(f.dump()));
    };
    send(session->Attach());
    beast::flat_buffer buffer;
    while (!stopping) {
      buffer.clear();
      ws.read(buffer);
      const std::string text = beast::buffers_to_string(buffer.data());
      nlohmann::json frame = nlohmann::json::parse(text, nullptr, false);
      if (frame.is_discarded()) frame = text;
      send(session->Handle(frame));
    }
  }

  void Serve(std::shared_ptr<tcp::socket> socket) {
    beast::error_code ec;
    beast::flat_buffer buffer;
    while (!stopping) {
      Request req;
      http::read(*socket, buffer, req, ec);
      if (ec) break;
      if (websocket::is_upgrade(req)) {
        const std::string id = EventsSessionId(
            std::string_view(req.target().data(), req.target().size()));
        auto session = id.empty() ? nullptr : sessions->Find(id);
        if (session) {
          try {
            ServeWebSocket(*socket, req, std::move(session));
          } catch (const std::exception&) {
          }
          break;
        }
      }
      const Response res = Route(req);
      http::write(*socket, res, ec);
      if (ec || !res.keep_alive()) break;
    }
    socket->shutdown(tcp::socket::shutdown_both, ec);
  }

  void Reap() {
    std::lock_guard<std::mutex> lock(mu);
    for (auto it = connections.begin(); it != connections.end();) {
      if (it->done) {
        it->thread.join();
        it = connections.erase(it);
      } else {
        ++it;
      }
    }
  }

  void AcceptLoop() {
    while (!stopping) {
      auto socket = std::make_shared<tcp::socket>(io);
      beast::error_code ec;
      acceptor->accept(*socket, ec);
      if (ec) {
        if (stopping) break;
        continue;
      }
      Reap();
      std::lock_guard<std::mutex> lock(mu);
      Connection& c = connections.emplace_back();
      c.socket = socket;
      c.thread = std::thread([this, socket, &c] {
        Serve(socket);
        c.done = true;
      });
    }
  }
};

HttpServer::HttpServer(SessionManager* sessions, PolicyCatalog* catalog,
                       ServerOptions opts)
    : impl_(std::make_unique<Impl>()) {
  impl_->sessions = sessions;
  impl_->catalog = catalog;
  impl_->opts = std::move(opts);
}

HttpServer::~HttpServer() { Stop(); }

void HttpServer::Start() {
  const tcp::endpoint endpoint(asio::ip::make_address(impl_->opts.address),
                               impl_->opts.port);
  impl_->acceptor = std::make_unique<tcp::acceptor>(impl_->io);
  impl_->acceptor->open(endpoint.protocol());
  impl_->acceptor->set_option(asio::socket_base::reuse_address(true));
  impl_->acceptor->bind(endpoint);
  impl_->acceptor->listen();
  impl_->accept_thread = std::thread([this] { impl_->AcceptLoop(); });
}

uint16_t HttpServer::port() const {
  return impl_->acceptor ? impl_->acceptor->local_endpoint().port() : 0;
}

void HttpServer::Stop() {
  if (!impl_ || !impl_->acceptor || impl_->stopping.exchange(true)) return;
  // shutdown(2) wakes threads blocked in accept/read on these descriptors.
  ::shutdown(impl_->acceptor->native_handle(), SHUT_RDWR);
  if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    for (auto& c : impl_->connections) ::shutdown(c.socket->native_handle(), SHUT_RDWR);
  }
  for (auto& c : impl_->connections) {
    if (c.thread.joinable()) c.thread.join();
  }
  impl_->connections.clear();
  beast::error_code ec;
  impl_->acceptor->close(ec);
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    impl_->stopped = true;
  }
  impl_->stopped_cv.notify_all();
}

void HttpServer::Wait() {
  std::unique_lock<std::mutex> lock(impl_->mu);
  impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

}  // namespace memassist
