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

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"

namespace syndro {
namespace {

using testing::random_dataset;
using testing::reference_match;

std::size_t reference_support(const Condition& c, const Dataset& d) {
  std::size_t s = 0;
  for (std::size_t n = 0; n < d.size(); ++n) s += reference_match(c, d, n) ? 1 : 0;
  return s;
}

TEST(Candidates, ExhaustiveAgainstReference) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const Dataset d = random_dataset(rng, 5 + rng() % 200, 2, 2, 20, 0.2);
    const std::size_t floor = 1 + rng() % 20;
    const auto cands = candidate_conditions(d, floor);

    // Reference: all tokens and all midpoints between distinct sorted values.
    std::vector<Condition> want;
    for (std::size_t k = 0; k < d.attribute_count(); ++k) {
      const Column& col = d.column(k);
      if (col.kind() == AttributeKind::discrete) {
        std::set<std::string> seen;
        for (std::size_t n = 0; n < d.size(); ++n)
          if (auto t = col.token(n)) seen.insert(std::string(*t));
        for (const auto& t : seen)
          if (reference_support(Condition::eq(k, t), d) >= floor) want.push_back(Condition::eq(k, t));
        continue;
      }
      std::set<double> seen;
      for (std::size_t n = 0; n < d.size(); ++n)
        if (auto v = col.value(n)) seen.insert(*v);
      const std::vector<double> vs(seen.begin(), seen.end());
      for (std::size_t i = 0; i + 1 < vs.size(); ++i)
        if (reference_support(Condition::le(k, (vs[i] + vs[i + 1]) / 2), d) >= floor)
          want.push_back(Condition::le(k, (vs[i] + vs[i + 1]) / 2));
      for (std::size_t i = 0; i + 1 < vs.size(); ++i)
        if (reference_support(Condition::gt(k, (vs[i] + vs[i + 1]) / 2), d) >= floor)
          want.push_back(Condition::gt(k, (vs[i] + vs[i + 1]) / 2));
    }
    ASSERT_EQ(cands, want);
  }
}

TEST(Candidates, ThresholdCapKeepsAtMostN) {
  std::mt19937_64 rng(22);
  const Dataset d = random_dataset(rng, 500, 0, 1, 20, 0.0);
  const auto all = candidate_conditions(d, 1);
  const auto capped = candidate_conditions(d, 1, {}, 3);
  EXPECT_GT(all.size(), capped.size());
  std::size_t le = 0, gt = 0;
  for (const auto& c : capped) (c.op == Op::le ? le : gt) += 1;
  EXPECT_LE(le, 3u);
  EXPECT_EQ(le, gt);
  for (const auto& c : capped) EXPECT_NE(std::find(all.begin(), all.end(), c), all.end());
}

TEST(Candidates, BlacklistAttributesAndConditions) {
  std::mt19937_64 rng(23);
  const Dataset d = random_dataset(rng, 300, 2, 1, 20, 0.0);
  const Blacklist bl = Blacklist::parse({"d0", "d1 = \"t2\"", "  "}, d.schema());
  EXPECT_TRUE(bl.bans_attribute(0));
  for (const auto& c : candidate_conditions(d, 1, bl)) {
    EXPECT_NE(c.attribute, 0u);
    EXPECT_FALSE(c == Condition::eq(1, "t2"));
  }
  EXPECT_EQ(bl.entries(d.schema()), (std::vector<std::string>{"d0", "d1 = \"t2\""}));
  Syndrome s({Conjunction({Condition::eq(1, "t2")})});
  EXPECT_FALSE(bl.admits(s));
  EXPECT_TRUE(bl.admits(Syndrome({Conjunction({Condition::eq(1, "t1")})})));
}

TEST(Candidates, SchemaFlagExcludesAttribute) {
  Schema s({{"a", AttributeKind::discrete, std::nullopt, true}, {"b", AttributeKind::discrete, std::nullopt, false}});
  Dataset d(s, {Column::discrete({"x"}, {0, 0}), Column::discrete({"y"}, {0, 0})},
            {parse_date("2020-01-01"), parse_date("2020-01-02")});
  const auto cands = candidate_conditions(d, 1);
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0], Condition::eq(1, "y"));
}

TEST(Candidates, Errors) {
  std::mt19937_64 rng(24);
  const Dataset d = random_dataset(rng, 10, 1, 1);
  EXPECT_THROW(candidate_conditions(d, 0), ConfigError);
  EXPECT_THROW(Blacklist::parse({"nope"}, d.schema()), ConfigError);
  EXPECT_THROW(Blacklist::parse({"d0 = "}, d.schema()), ConfigError);
  EXPECT_THROW(Blacklist::parse({"x0 = 1"}, d.schema()), ConfigError);
}

TEST(Candidates, BlacklistFile) {
  const auto entries = read_blacklist_file(std::string(SYNDRO_SAMPLE_DIR) + "/blacklist.txt");
  EXPECT_EQ(entries, (std::vector<std::string>{"icd_full"}));
  EXPECT_THROW(read_blacklist_file("/nonexistent/blacklist"), DataError);
}

}  // namespace
}  // namespace syndro
