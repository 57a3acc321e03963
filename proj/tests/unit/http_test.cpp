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

#include <gtest/gtest.h>

#include <thread>

#include "syndro/http.hpp"
#include "syndro/synthbench.hpp"

namespace syndro {
namespace {

TEST(Http, RoundTripWithCors) {
  Workbench::Options o;
  o.async = false;
  o.defaults.min_support = 0.01;
  Workbench wb(o);
  const Dataset d = gen_synthetic_dataset(2000, 4, 3, parse_date("2020-01-01"), parse_date("2020-02-29"), 5);
  const auto index = TimeIndex::spanning(d, Granularity::weekly);
  const Syndrome planted({Conjunction({Condition::eq(1, "v1")})});
  wb.register_dataset("synthetic", d,
                      TargetSeries::from_counts(Granularity::weekly, index.first_key(), count_series(planted, d, index)));

  httplib::Server server;
  mount(server, wb);
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post("/api/sessions", "{}", "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  EXPECT_EQ(created->get_header_value("Access-Control-Allow-Origin"), "*");
  const std::string id = nlohmann::json::parse(created->body)["id"];

  auto fit = client.Post("/api/sessions/" + id + "/fit", "{}", "application/json");
  ASSERT_TRUE(fit);
  EXPECT_EQ(fit->status, 202);
  const std::string job = nlohmann::json::parse(fit->body)["job"];
  auto polled = client.Get("/api/jobs/" + job);
  ASSERT_TRUE(polled);
  const auto j = nlohmann::json::parse(polled->body);
  EXPECT_EQ(j["state"], "done");
  EXPECT_EQ(j["result"]["syndrome"]["text"], "a1 = \"v1\"");

  auto eval = client.Post("/api/sessions/" + id + "/evaluate", "a1 >", "text/plain");
  ASSERT_TRUE(eval);
  EXPECT_EQ(eval->status, 400);
  EXPECT_EQ(nlohmann::json::parse(eval->body)["error"]["column"], 4);

  auto missing = client.Get("/api/jobs/unknown");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);

  auto pre = client.Options("/api/sessions");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
  EXPECT_NE(pre->get_header_value("Access-Control-Allow-Methods").find("PUT"), std::string::npos);

  server.stop();
  t.join();
}

}  // namespace
}  // namespace syndro
