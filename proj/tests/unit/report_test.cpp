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

#include "fixtures.hpp"

namespace syndro {
namespace {

TEST(Report, ConfigRoundTripsThroughJson) {
  LearnerConfig c;
  c.min_support = 0.01;
  c.max_conjunctions = 7;
  c.max_conditions = 3;
  c.objective = ObjectiveKind::kendall;
  c.semantics = Semantics::additive;
  c.blacklist = {"icd"};
  c.categories = {"1", "vital"};
  c.max_thresholds = 16;
  c.seed = 42;
  const LearnerConfig back = apply_config(LearnerConfig{}, to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_FALSE(to_json(c).contains("threads"));
}

TEST(Report, ApplyConfigIsADelta) {
  LearnerConfig base;
  base.max_conjunctions = 9;
  const auto c = apply_config(base, nlohmann::json{{"objective", "spearman"}});
  EXPECT_EQ(c.max_conjunctions, 9u);
  EXPECT_EQ(c.objective, ObjectiveKind::spearman);
  EXPECT_EQ(apply_config(base, nlohmann::json{{"max_conditions", nullptr}}).max_conditions, std::nullopt);
}

TEST(Report, ApplyConfigRejectsBadInput) {
  EXPECT_THROW(apply_config({}, nlohmann::json{{"speed", 1}}), ConfigError);
  EXPECT_THROW(apply_config({}, nlohmann::json{{"min_support", "high"}}), ConfigError);
  EXPECT_THROW(apply_config({}, nlohmann::json{{"objective", "cosine"}}), ConfigError);
  EXPECT_THROW(apply_config({}, nlohmann::json::array()), ConfigError);
}

TEST(Report, FitReportJsonFields) {
  std::mt19937_64 rng(1);
  const Dataset d = testing::random_dataset(rng, 300, 2, 1, 20, 0.0);
  const auto index = TimeIndex::spanning(d, Granularity::daily);
  const Syndrome planted({Conjunction({Condition::eq(0, "t1")})});
  const auto targets =
      TargetSeries::from_counts(Granularity::daily, index.first_key(), count_series(planted, d, index));
  LearnerConfig c;
  c.min_support = 0.01;
  const auto r = fit(d, index, targets, c);
  const auto j = to_json(r, d.schema());
  EXPECT_EQ(j["syndrome"]["text"], format_syndrome(r.syndrome, d.schema()));
  EXPECT_EQ(j["counts"].get<CountSeries>(), r.counts);
  EXPECT_EQ(j["labels"].size(), index.bucket_count());
  EXPECT_EQ(j["support_floor"], 3);
  EXPECT_EQ(j["trace"].size(), r.trace.size());
  EXPECT_FALSE(j.contains("wall_seconds"));
  EXPECT_TRUE(to_json(r, d.schema(), true).contains("wall_seconds"));
}

TEST(Report, AllScores) {
  const CountSeries a{1, 2, 3, 4}, b{1, 2, 3, 5};
  const auto j = all_scores(a, b);
  EXPECT_NEAR(j["spearman"].get<double>(), 1.0, 1e-15);
  EXPECT_NEAR(j["kendall"].get<double>(), 1.0, 1e-15);
  EXPECT_NEAR(j["pearson"].get<double>(), 0.9827076298239907, 1e-15);
}

}  // namespace
}  // namespace syndro
