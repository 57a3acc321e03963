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

// Shared helpers for the unit tests: small random datasets and a row-by-row
// reference evaluator that shares no code with the library's coverage path.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "syndro/syndro.hpp"

namespace syndro::testing {

inline Schema mixed_schema(std::size_t discrete, std::size_t numeric) {
  std::vector<AttributeSchema> attrs;
  for (std::size_t k = 0; k < discrete; ++k)
    attrs.push_back({"d" + std::to_string(k), AttributeKind::discrete, "cat" + std::to_string(k % 2), false});
  for (std::size_t k = 0; k < numeric; ++k)
    attrs.push_back({"x" + std::to_string(k), AttributeKind::numeric, "vital", false});
  return Schema(std::move(attrs));
}

/// Random dataset through the CSV reader, so tokens and values are exactly
/// what a user file would produce.
inline Dataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t discrete, std::size_t numeric,
                              std::size_t days = 60, double missing = 0.1, std::size_t tokens = 4) {
  Schema schema = mixed_schema(discrete, numeric);
  std::ostringstream csv;
  csv << "date";
  for (const auto& a : schema.attributes()) csv << ',' << a.name;
  csv << '\n';
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Date first = parse_date("2020-01-01");
  for (std::size_t i = 0; i < n; ++i) {
    csv << format_date(first + std::chrono::days{static_cast<int>(rng() % days)});
    for (std::size_t k = 0; k < discrete; ++k) {
      csv << ',';
      if (u(rng) >= missing) csv << "t" << rng() % tokens;
    }
    for (std::size_t k = 0; k < numeric; ++k) {
      csv << ',';
      if (u(rng) >= missing) csv << static_cast<double>(rng() % 20) / 2.0;
    }
    csv << '\n';
  }
  std::istringstream in(csv.str());
  return read_dataset(in, std::move(schema));
}

inline bool reference_match(const Condition& c, const Dataset& d, std::size_t n) {
  const Column& col = d.column(c.attribute);
  if (c.op == Op::eq) {
    const auto t = col.token(n);
    return t && std::string(*t) == c.token;
  }
  const auto v = col.value(n);
  if (!v) return false;
  return c.op == Op::le ? *v <= c.threshold : *v > c.threshold;
}

inline bool reference_match(const Conjunction& conj, const Dataset& d, std::size_t n) {
  for (const auto& c : conj.conditions())
    if (!reference_match(c, d, n)) return false;
  return true;
}

/// Disjunctive counts: each instance counted once if any conjunction holds.
inline std::vector<std::int64_t> reference_counts(const Syndrome& s, const Dataset& d, const TimeIndex& index) {
  std::vector<std::int64_t> out(index.bucket_count(), 0);
  for (std::size_t n = 0; n < d.size(); ++n) {
    if (index.bucket_of(n) < 0) continue;
    bool hit = false;
    for (const auto& conj : s.conjunctions()) hit = hit || reference_match(conj, d, n);
    if (hit) ++out[static_cast<std::size_t>(index.bucket_of(n))];
  }
  return out;
}

inline Condition random_condition(std::mt19937_64& rng, const Dataset& d, std::size_t tokens = 4) {
  const std::size_t k = rng() % d.attribute_count();
  if (d.schema()[k].kind == AttributeKind::discrete) return Condition::eq(k, "t" + std::to_string(rng() % tokens));
  const double t = static_cast<double>(rng() % 21) / 2.0 - 0.25;
  return rng() % 2 ? Condition::le(k, t) : Condition::gt(k, t);
}

inline Conjunction random_conjunction(std::mt19937_64& rng, const Dataset& d, std::size_t max_conditions) {
  Conjunction conj({random_condition(rng, d)});
  const std::size_t m = 1 + rng() % max_conditions;
  for (int tries = 0; conj.size() < m && tries < 50; ++tries) {
    auto c = random_condition(rng, d);
    if (conj.can_append(c)) conj.append(std::move(c));
  }
  return conj;
}

inline Syndrome random_syndrome(std::mt19937_64& rng, const Dataset& d, std::size_t max_conjunctions,
                                std::size_t max_conditions) {
  Syndrome s;
  const std::size_t l = 1 + rng() % max_conjunctions;
  for (std::size_t i = 0; i < l; ++i) s.append(random_conjunction(rng, d, max_conditions));
  return s;
}

}  // namespace syndro::testing
