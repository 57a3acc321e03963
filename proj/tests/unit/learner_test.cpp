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

#include <random>

#include "fixtures.hpp"

namespace syndro {
namespace {

using testing::random_dataset;
using testing::random_syndrome;
using testing::reference_counts;

struct Planted {
  Dataset dataset;
  TimeIndex index;
  TargetSeries targets;
};

Planted plant(Dataset d, const Syndrome& s, Granularity g = Granularity::daily) {
  TimeIndex index = TimeIndex::spanning(d, g);
  auto targets = TargetSeries::from_counts(g, index.first_key(), count_series(s, d, index));
  return {std::move(d), std::move(index), std::move(targets)};
}

Dataset synthetic(std::uint64_t seed, std::size_t n = 6000, std::size_t k = 8) {
  return gen_synthetic_dataset(n, k, 4, parse_date("2020-01-01"), parse_date("2020-03-31"), seed);
}

LearnerConfig config_with(double s, std::size_t l = 10) {
  LearnerConfig c;
  c.min_support = s;
  c.max_conjunctions = l;
  return c;
}

TEST(Learner, SupportFloor) {
  EXPECT_EQ(support_floor(1900000, 0.0001), 190u);
  EXPECT_EQ(support_floor(100000, 0.0001), 10u);
  EXPECT_EQ(support_floor(100001, 0.0001), 11u);
  EXPECT_EQ(support_floor(50, 0.0001), 1u);
  EXPECT_EQ(support_floor(3, 0.5), 2u);
}

TEST(Learner, ConfigValidation) {
  LearnerConfig c;
  c.min_support = 1.5;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_STREQ(e.what(), "min-support must be in (0,1)");
  }
  c = {};
  c.max_conjunctions = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.max_conditions = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.improvement_epsilon = -1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Learner, RecoversPlantedSingleIndicator) {
  const Dataset d = synthetic(1);
  const Syndrome planted({Conjunction({Condition::eq(3, "v1")})});
  const auto p = plant(d, planted);
  const auto r = fit(p.dataset, p.index, p.targets, config_with(0.001));
  EXPECT_TRUE(same_indicators(r.syndrome, planted)) << format_syndrome(r.syndrome, d.schema());
  EXPECT_NEAR(r.score.value, 1.0, 1e-12);
  EXPECT_EQ(r.counts, p.targets.counts);
}

TEST(Learner, RecoversPlantedDisjunction) {
  const Dataset d = synthetic(2);
  const Syndrome planted({Conjunction({Condition::eq(0, "v2")}), Conjunction({Condition::eq(5, "v3")})});
  const auto p = plant(d, planted);
  const auto r = fit(p.dataset, p.index, p.targets, config_with(0.001));
  EXPECT_TRUE(same_indicators(r.syndrome, planted)) << format_syndrome(r.syndrome, d.schema());
}

// An exhaustive scan over every pair of equality conditions confirms the
// planted pair is the optimum; the hill climber must reach it.
TEST(Learner, PlantedPairMatchesExhaustiveOptimum) {
  const Dataset d = synthetic(3, 4000, 5);
  const Conjunction pair({Condition::eq(1, "v0"), Condition::eq(4, "v1")});
  const auto p = plant(d, Syndrome({pair}));
  const auto cands = candidate_conditions(d, 1);

  double best = -1;
  std::size_t at_best = 0;
  for (std::size_t i = 0; i < cands.size(); ++i)
    for (std::size_t j = i + 1; j < cands.size(); ++j) {
      if (cands[i].attribute == cands[j].attribute) continue;
      const Syndrome s({Conjunction({cands[i], cands[j]})});
      const double v = pearson_abs(p.targets.counts, reference_counts(s, d, p.index)).value;
      if (v > best + 1e-12) {
        best = v;
        at_best = 1;
      } else if (v > best - 1e-12) {
        ++at_best;
      }
    }
  ASSERT_NEAR(best, 1.0, 1e-12);
  ASSERT_EQ(at_best, 1u);

  LearnerConfig c = config_with(0.001);
  c.max_conditions = 2;
  const auto grown = grow_conjunction(d, p.index, p.targets, CoverageMask(d.size()),
                                      CountSeries(p.index.bucket_count(), 0), c);
  ASSERT_TRUE(grown);
  EXPECT_EQ(grown->first.sorted(), pair.sorted());
  EXPECT_NEAR(grown->second.value, 1.0, 1e-12);
}

TEST(Learner, EvaluateCandidateEqualsFromScratch) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset d = random_dataset(rng, 50 + rng() % 300, 3, 2, 40);
    const auto index = TimeIndex::spanning(d, Granularity::daily);
    if (index.bucket_count() < 2) continue;
    CountSeries y(index.bucket_count());
    for (auto& v : y) v = static_cast<std::int64_t>(rng() % 10);
    const auto targets = TargetSeries::from_counts(Granularity::daily, index.first_key(), y);
    const Syndrome model = random_syndrome(rng, d, 3, 3);
    const Conjunction cand = testing::random_conjunction(rng, d, 3);
    for (auto sem : {Semantics::disjunctive, Semantics::additive}) {
      const auto counts = count_series(model, d, index, sem);
      Syndrome grown = model;
      grown.append(cand);
      const auto scratch = count_series(grown, d, index, sem);
      for (auto obj : {ObjectiveKind::pearson, ObjectiveKind::spearman, ObjectiveKind::kendall}) {
        const Score inc = evaluate_candidate(counts, coverage(model, d), coverage(cand, d), index, targets, sem, obj);
        const Score ref = score_model(obj, y, scratch);
        ASSERT_NEAR(inc.value, ref.value, 1e-12);
        ASSERT_EQ(inc.degenerate, ref.degenerate);
      }
    }
  }
}

TEST(Learner, ReportIsIndependentOfThreadCount) {
  const Dataset d = synthetic(4, 8000, 10);
  const Syndrome planted({Conjunction({Condition::eq(2, "v0"), Condition::eq(7, "v1")}),
                          Conjunction({Condition::eq(4, "v2")})});
  const auto p = plant(d, planted, Granularity::weekly);
  std::string first;
  for (std::size_t threads : {1, 4, 8}) {
    LearnerConfig c = config_with(0.002);
    c.threads = threads;
    const auto text = to_json(fit(p.dataset, p.index, p.targets, c), d.schema()).dump();
    if (first.empty())
      first = text;
    else
      EXPECT_EQ(text, first) << threads << " threads";
  }
}

TEST(Learner, RespectsConstraints) {
  const Dataset d = synthetic(5, 6000, 8);
  std::mt19937_64 rng(5);
  CountSeries noise_y;
  const auto index = TimeIndex::spanning(d, Granularity::daily);
  for (std::size_t t = 0; t < index.bucket_count(); ++t) noise_y.push_back(static_cast<std::int64_t>(rng() % 50));
  const auto targets = TargetSeries::from_counts(Granularity::daily, index.first_key(), noise_y);
  LearnerConfig c = config_with(0.01, 4);
  c.max_conditions = 2;
  const auto r = fit(d, index, targets, c);
  const auto floor = support_floor(index.retained(), c.min_support);
  EXPECT_EQ(r.support_floor, floor);
  EXPECT_LE(r.syndrome.size(), 4u);
  double last = 0;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& e = r.trace[i];
    EXPECT_LE(e.conjunction.size(), 2u);
    EXPECT_GE(e.support, floor);
    EXPECT_EQ(e.support, coverage(e.conjunction, d).count());
    EXPECT_GT(e.score_after, e.score_before);
    EXPECT_GE(e.score_after, last);
    last = e.score_after;
  }
  EXPECT_EQ(r.counts, count_series(r.syndrome, d, index));
}

TEST(Learner, BlacklistedIndicatorIsAvoided) {
  const Dataset d = synthetic(6);
  const Syndrome planted({Conjunction({Condition::eq(3, "v1")})});
  const auto p = plant(d, planted);
  const auto clean = fit(p.dataset, p.index, p.targets, config_with(0.001));
  LearnerConfig c = config_with(0.001);
  c.blacklist = {format_condition(planted[0][0], d.schema())};
  const auto banned = fit(p.dataset, p.index, p.targets, c);
  const Blacklist bl = Blacklist::parse(c.blacklist, d.schema());
  EXPECT_TRUE(bl.admits(banned.syndrome));
  EXPECT_LT(banned.score.value, clean.score.value);

  c.blacklist = {d.schema()[3].name};
  const auto whole = fit(p.dataset, p.index, p.targets, c);
  for (const auto& conj : whole.syndrome.conjunctions())
    for (const auto& cond : conj.conditions()) EXPECT_NE(cond.attribute, 3u);
}

TEST(Learner, CategoryFilter) {
  Schema s({{"a", AttributeKind::discrete, "one", false},
            {"b", AttributeKind::discrete, "two", false},
            {"c", AttributeKind::discrete, std::nullopt, false}});
  LearnerConfig c;
  c.categories = {"2"};
  auto bl = resolve_blacklist(c, s);
  EXPECT_TRUE(bl.bans_attribute(0));
  EXPECT_FALSE(bl.bans_attribute(1));
  EXPECT_TRUE(bl.bans_attribute(2));
  c.categories = {"one"};
  bl = resolve_blacklist(c, s);
  EXPECT_FALSE(bl.bans_attribute(0));
  c.categories = {"3"};
  EXPECT_THROW(resolve_blacklist(c, s), ConfigError);
  c.categories = {"zero"};
  EXPECT_THROW(resolve_blacklist(c, s), ConfigError);
}

TEST(Learner, StopsWhenNothingImproves) {
  const Dataset d = synthetic(7, 2000, 4);
  const auto index = TimeIndex::spanning(d, Granularity::monthly);
  const auto targets = TargetSeries::from_counts(Granularity::monthly, index.first_key(),
                                                 CountSeries(index.bucket_count(), 7));
  const auto r = fit(d, index, targets, config_with(0.01));
  EXPECT_TRUE(r.syndrome.empty());
  EXPECT_TRUE(r.score.degenerate);
}

TEST(Learner, ObserverSeesEveryConjunction) {
  const Dataset d = synthetic(8);
  const auto p = plant(d, Syndrome({Conjunction({Condition::eq(0, "v0")}), Conjunction({Condition::eq(1, "v3")})}));
  std::size_t seen = 0;
  const auto r = fit(p.dataset, p.index, p.targets, config_with(0.001), [&](const TraceEntry&) { ++seen; });
  EXPECT_EQ(seen, r.trace.size());
}

TEST(Learner, InputChecks) {
  const Dataset d = synthetic(9, 500, 3);
  const Dataset other = synthetic(10, 400, 3);
  const auto index = TimeIndex::spanning(d, Granularity::daily);
  const auto targets = TargetSeries::from_counts(Granularity::daily, index.first_key(),
                                                 CountSeries(index.bucket_count(), 1));
  EXPECT_THROW(fit(other, index, targets, LearnerConfig{}), DataError);
  const auto short_targets = TargetSeries::from_counts(Granularity::daily, index.first_key(), {1, 2});
  EXPECT_THROW(fit(d, index, short_targets, LearnerConfig{}), DataError);
}

}  // namespace
}  // namespace syndro
