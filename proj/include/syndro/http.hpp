// Copyright 2026 The Syndro Authors
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

#pragma once

// HTTP binding for the workbench. Requires the vendored cpp-httplib.

#include <functional>
#include <string>

#include <httplib.h>

#include "syndro/service.hpp"

namespace syndro {

/// Routes every request on `server` through `bench.handle`.
inline void mount(httplib::Server& server, Workbench& bench) {
  const std::string origin = bench.options().cors_origin;
  server.set_default_headers({{"Access-Control-Allow-Origin", origin},
                              {"Access-Control-Allow-Methods", "GET, POST, PUT, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  auto handler = [&bench](const httplib::Request& req, httplib::Response& res) {
    const auto r = bench.handle(req.method, req.target, req.body);
    res.status = r.status;
    if (!r.body.empty()) res.set_content(r.body, r.content_type);
  };
  const std::string all = R"(/.*)";
  server.Get(all, handler);
  server.Post(all, handler);
  server.Put(all, handler);
  server.Delete(all, handler);
  server.Options(all, handler);
}

/// Blocks serving on host:port until the server is stopped.
inline bool serve(Workbench& bench, const std::string& host, int port) {
  httplib::Server server;
  mount(server, bench);
  return server.listen(host, port);
}

}  // namespace syndro
