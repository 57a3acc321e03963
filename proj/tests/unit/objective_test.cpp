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
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "syndro/objective.hpp"

namespace syndro {
namespace {

using Real = boost::multiprecision::cpp_bin_float_50;
using Series = std::vector<std::int64_t>;

Real ref_pearson(const std::vector<Real>& x, const std::vector<Real>& y) {
  const auto n = static_cast<double>(x.size());
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Real sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0;
  return abs(sxy / sqrt(sxx * syy));
}

std::vector<Real> as_real(const Series& s) { return {s.begin(), s.end()}; }

std::vector<Real> average_ranks(const Series& s) {
  std::vector<Real> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (auto v : s) {
      less += v < s[i];
      equal += v == s[i];
    }
    out[i] = Real(less) + (Real(equal) + 1) / 2;
  }
  return out;
}

Real ref_kendall(const Series& x, const Series& y) {
  Real conc = 0, disc = 0, tx = 0, ty = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const auto a = (x[i] > x[j]) - (x[i] < x[j]);
      const auto b = (y[i] > y[j]) - (y[i] < y[j]);
      if (a == 0 && b == 0) continue;
      if (a == 0) {
        tx += 1;
      } else if (b == 0) {
        ty += 1;
      } else if (a == b) {
        conc += 1;
      } else {
        disc += 1;
      }
    }
  const Real d = sqrt((conc + disc + tx) * (conc + disc + ty));
  if (d == 0) return 0;
  return abs((conc - disc) / d);
}

Series random_series(std::mt19937_64& rng, std::size_t T, std::int64_t max) {
  Series s(T);
  for (auto& v : s) v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max + 1));
  return s;
}

TEST(Objective, FrozenValues) {
  const Series a{1, 2, 3, 4}, b{1, 2, 3, 5};
  EXPECT_NEAR(pearson_abs(a, b).value, 0.9827076298239907, 1e-15);
  EXPECT_DOUBLE_EQ(spearman_abs(a, b).value, 1.0);
  EXPECT_DOUBLE_EQ(kendall_abs(a, b).value, 1.0);

  const Series c{3, 1, 2, 2, 5}, d{1, 1, 2, 3, 3};
  EXPECT_NEAR(pearson_abs(c, d).value, 0.4945353550468403, 1e-15);
  EXPECT_NEAR(spearman_abs(c, d).value, 0.40555355282690636, 1e-15);
  EXPECT_NEAR(kendall_abs(c, d).value, 0.35355339059327373, 1e-15);
}

TEST(Objective, AbsoluteValueOfNegativeCorrelation) {
  const Series a{1, 2, 3, 4}, b{8, 6, 4, 2};
  EXPECT_DOUBLE_EQ(pearson_abs(a, b).value, 1.0);
  EXPECT_DOUBLE_EQ(spearman_abs(a, b).value, 1.0);
  EXPECT_DOUBLE_EQ(kendall_abs(a, b).value, 1.0);
}

TEST(Objective, ZeroVarianceIsDegenerate) {
  const Series flat{5, 5, 5, 5}, a{1, 2, 3, 4};
  for (auto k : {ObjectiveKind::pearson, ObjectiveKind::spearman, ObjectiveKind::kendall}) {
    const Score s = score_model(k, a, flat);
    EXPECT_TRUE(s.degenerate);
    EXPECT_EQ(s.value, 0.0);
    EXPECT_FALSE(score_model(k, a, a).degenerate);
  }
}

TEST(Objective, InvalidArguments) {
  const Series a{1, 2, 3}, b{1, 2};
  EXPECT_THROW(pearson_abs(a, b), std::invalid_argument);
  EXPECT_THROW(kendall_abs(Series{1}, Series{1}), std::invalid_argument);
  EXPECT_THROW(parse_objective("cosine"), ConfigError);
  EXPECT_EQ(parse_objective(to_string(ObjectiveKind::kendall)), ObjectiveKind::kendall);
}

TEST(Objective, MatchesHighPrecisionReference) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t T = 2 + rng() % 120;
    const std::int64_t max = trial % 3 == 0 ? 5 : 1000000;  // small ranges force ties
    const Series y = random_series(rng, T, max), h = random_series(rng, T, max);
    ASSERT_NEAR(pearson_abs(y, h).value, ref_pearson(as_real(y), as_real(h)).convert_to<double>(), 1e-12);
    ASSERT_NEAR(spearman_abs(y, h).value, ref_pearson(average_ranks(y), average_ranks(h)).convert_to<double>(),
                1e-12);
    ASSERT_NEAR(kendall_abs(y, h).value, ref_kendall(y, h).convert_to<double>(), 1e-12);
  }
}

TEST(Objective, LargeCountsStayExact) {
  // Values near 2^40 overflow naive 64-bit sums of squares.
  const std::int64_t big = std::int64_t{1} << 40;
  const Series y{big, big + 1, big + 3, big + 2}, h{big + 5, big + 6, big + 8, big + 7};
  EXPECT_NEAR(pearson_abs(y, h).value, 1.0, 1e-15);
}

}  // namespace
}  // namespace syndro
