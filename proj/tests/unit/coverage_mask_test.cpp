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
#include <set>
#include <vector>

#include "syndro/coverage_mask.hpp"

namespace syndro {
namespace {

CoverageMask from_set(std::size_t size, const std::set<std::size_t>& bits) {
  CoverageMask m(size);
  for (auto b : bits) m.set(b);
  return m;
}

std::set<std::size_t> to_set(const CoverageMask& m) {
  std::set<std::size_t> out;
  m.for_each([&](std::size_t i) { out.insert(i); });
  return out;
}

TEST(CoverageMask, MatchesStdSetAlgebra) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t size = 1 + rng() % 300;
    std::set<std::size_t> a, b;
    for (std::size_t i = 0; i < size; ++i) {
      if (rng() % 3 == 0) a.insert(i);
      if (rng() % 4 == 0) b.insert(i);
    }
    const auto ma = from_set(size, a), mb = from_set(size, b);
    EXPECT_EQ(ma.count(), a.size());
    EXPECT_EQ(to_set(ma), a);

    std::set<std::size_t> uni = a, inter, diff;
    uni.insert(b.begin(), b.end());
    for (auto x : a) (b.count(x) ? inter : diff).insert(x);

    auto mu = ma;
    mu |= mb;
    auto mi = ma;
    mi &= mb;
    EXPECT_EQ(to_set(mu), uni);
    EXPECT_EQ(to_set(mi), inter);
    EXPECT_EQ(to_set(ma.minus(mb)), diff);
    EXPECT_TRUE(mi.is_subset_of(ma));
    EXPECT_EQ(ma.is_subset_of(mb), diff.empty());
    EXPECT_EQ(ma.none(), a.empty());
  }
}

TEST(CoverageMask, ResetAndEquality) {
  CoverageMask m(70);
  m.set(69);
  m.set(3);
  m.reset(69);
  EXPECT_EQ(m, from_set(70, {3}));
  EXPECT_FALSE(m.test(69));
}

TEST(CoverageMask, SizeMismatchIsRejected) {
  CoverageMask a(10), b(11);
  EXPECT_THROW(a |= b, std::invalid_argument);
}

}  // namespace
}  // namespace syndro
