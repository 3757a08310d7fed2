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

// HTTP and WebSocket front end for SessionManager.
//
//   POST /sessions                 {condition, policy, seed?} -> opening frames
//   GET  /policies                 policy catalog
//   GET  /sessions/{id}/events     WebSocket upgrade; JSON frames both ways

#ifndef MEMASSIST_HTTP_SERVER_H_
#define MEMASSIST_HTTP_SERVER_H_

#include <cstdint>
#include <memory>
#include <string>

#include "memassist/policy_catalog.h"
#include "memassist/session.h"

namespace memassist {

struct ServerOptions {
  std::string address = "127.0.0.1";
  uint16_t port = 8080;  // 0 picks a free port
};

class HttpServer {
 public:
  HttpServer(SessionManager* sessions, PolicyCatalog* catalog, ServerOptions opts);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and starts accepting on a background thread. Throws on bind
  // failure.
  void Start();
  // Port actually bound; valid after Start().
  uint16_t port() const;
  // Closes the listener and every open connection, then joins all threads.
  void Stop();
  // Blocks until Stop() is called from another thread.
  void Wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace memassist

#endif  // MEMASSIST_HTTP_SERVER_H_
