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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "syndro/coverage_mask.hpp"
#include "syndro/dataset.hpp"
#include "syndro/error.hpp"
#include "syndro/time_index.hpp"

namespace syndro {

enum class Op { eq, le, gt };

inline std::string_view to_string(Op op) {
  switch (op) {
    case Op::eq:
      return "=";
    case Op::le:
      return "<=";
    case Op::gt:
      return ">";
  }
  return "=";
}

/// Atomic comparison of one attribute against a constant. `token` is used by
/// `eq`, `threshold` by `le` / `gt`.
struct Condition {
  std::size_t attribute = 0;
  Op op = Op::eq;
  std::string token;
  double threshold = 0.0;

  static Condition eq(std::size_t attribute, std::string token) {
    return {attribute, Op::eq, std::move(token), 0.0};
  }
  static Condition le(std::size_t attribute, double threshold) {
    return {attribute, Op::le, {}, threshold};
  }
  static Condition gt(std::size_t attribute, double threshold) {
    return {attribute, Op::gt, {}, threshold};
  }

  bool is_numeric() const noexcept { return op != Op::eq; }

  friend bool operator==(const Condition& a, const Condition& b) {
    if (a.attribute != b.attribute || a.op != b.op) return false;
    return a.op == Op::eq ? a.token == b.token : a.threshold == b.threshold;
  }

  /// Attribute index, then operator (eq < le < gt), then value ascending.
  friend bool operator<(const Condition& a, const Condition& b) {
    if (a.attribute != b.attribute) return a.attribute < b.attribute;
    if (a.op != b.op) return a.op < b.op;
    return a.op == Op::eq ? a.token < b.token : a.threshold < b.threshold;
  }

  /// Throws ModelError unless the condition fits the schema.
  void validate(const Schema& schema) const {
    if (attribute >= schema.size()) throw ModelError("condition refers to an unknown attribute");
    const auto& a = schema[attribute];
    if ((op == Op::eq) != (a.kind == AttributeKind::discrete))
      throw ModelError("operator '" + std::string(to_string(op)) + "' does not apply to " +
                       to_string(a.kind) + " attribute '" + a.name + "'");
    if (is_numeric() && !std::isfinite(threshold))
      throw ModelError("threshold on '" + a.name + "' must be finite");
  }
};

/// Conjunction of conditions. Non-empty, duplicate free, at most one equality
/// per attribute, and numeric bounds on an attribute leave a non-empty range.
class Conjunction {
 public:
  Conjunction() = default;

  explicit Conjunction(std::vector<Condition> conditions) {
    if (conditions.empty()) throw ModelError("a conjunction needs at least one condition");
    for (auto& c : conditions) append(std::move(c));
  }

  /// Whether `c` could be appended without violating the invariants.
  bool can_append(const Condition& c) const { return !conflict(c); }

  void append(Condition c) {
    if (auto why = conflict(c)) throw ModelError(*why);
    conditions_.push_back(std::move(c));
  }

  const std::vector<Condition>& conditions() const noexcept { return conditions_; }
  std::size_t size() const noexcept { return conditions_.size(); }
  bool empty() const noexcept { return conditions_.empty(); }
  const Condition& operator[](std::size_t i) const { return conditions_.at(i); }

  void validate(const Schema& schema) const {
    if (conditions_.empty()) throw ModelError("a conjunction needs at least one condition");
    for (const auto& c : conditions_) c.validate(schema);
  }

  /// Conditions in canonical order, for order-insensitive comparison.
  std::vector<Condition> sorted() const {
    auto out = conditions_;
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Conjunction&, const Conjunction&) = default;

 private:
  std::optional<std::string> conflict(const Condition& c) const {
    for (const auto& e : conditions_) {
      if (e.attribute != c.attribute) continue;
      if (e == c) return "duplicate condition in conjunction";
      if (e.op == Op::eq && c.op == Op::eq)
        return "at most one equality condition per attribute";
      if (e.op == Op::le && c.op == Op::gt && !(e.threshold > c.threshold))
        return "contradictory numeric bounds";
      if (e.op == Op::gt && c.op == Op::le && !(c.threshold > e.threshold))
        return "contradictory numeric bounds";
    }
    return std::nullopt;
  }

  std::vector<Condition> conditions_;
};

/// Ordered disjunction of conjunctions (possibly empty).
class Syndrome {
 public:
  Syndrome() = default;
  explicit Syndrome(std::vector<Conjunction> conjunctions) : conjunctions_(std::move(conjunctions)) {
    for (const auto& c : conjunctions_)
      if (c.empty()) throw ModelError("a conjunction needs at least one condition");
  }

  void append(Conjunction c) {
    if (c.empty()) throw ModelError("a conjunction needs at least one condition");
    conjunctions_.push_back(std::move(c));
  }

  const std::vector<Conjunction>& conjunctions() const noexcept { return conjunctions_; }
  std::size_t size() const noexcept { return conjunctions_.size(); }
  bool empty() const noexcept { return conjunctions_.empty(); }
  const Conjunction& operator[](std::size_t i) const { return conjunctions_.at(i); }

  void validate(const Schema& schema) const {
    for (const auto& c : conjunctions_) c.validate(schema);
  }

  /// Set-of-sets view: order of conditions and conjunctions is ignored.
  std::vector<std::vector<Condition>> as_set() const {
    std::vector<std::vector<Condition>> out;
    for (const auto& c : conjunctions_) out.push_back(c.sorted());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend bool operator==(const Syndrome&, const Syndrome&) = default;

 private:
  std::vector<Conjunction> conjunctions_;
};

inline bool same_indicators(const Syndrome& a, const Syndrome& b) { return a.as_set() == b.as_set(); }

/// How overlapping conjunctions are counted: once per instance (disjunctive)
/// or once per covering conjunction (additive).
enum class Semantics { disjunctive, additive };

inline std::string to_string(Semantics s) {
  return s == Semantics::disjunctive ? "disjunctive" : "additive";
}

inline Semantics parse_semantics(std::string_view text) {
  if (text == "disjunctive") return Semantics::disjunctive;
  if (text == "additive") return Semantics::additive;
  throw ConfigError("unknown semantics '" + std::string(text) +
                    "' (expected disjunctive or additive)");
}

using CountSeries = std::vector<std::int64_t>;

/// Missing cells never satisfy a condition.
inline bool matches(const Condition& c, const Dataset& dataset, std::size_t n) {
  const Column& col = dataset.column(c.attribute);
  switch (c.op) {
    case Op::eq: {
      auto t = col.token(n);
      return t && *t == c.token;
    }
    case Op::le: {
      auto v = col.value(n);
      return v && *v <= c.threshold;
    }
    case Op::gt: {
      auto v = col.value(n);
      return v && *v > c.threshold;
    }
  }
  return false;
}

namespace detail {

/// Restricts `mask` to instances satisfying `c`.
inline void intersect(CoverageMask& mask, const Condition& c, const Dataset& dataset) {
  const Column& col = dataset.column(c.attribute);
  if (c.op == Op::eq) {
    if (col.kind() != AttributeKind::discrete) {
      mask = CoverageMask(mask.size());
      return;
    }
    const auto code = col.find_code(c.token);
    const auto& codes = col.codes();
    mask.for_each([&](std::size_t n) {
      if (!code || codes[n] != *code) mask.reset(n);
    });
    return;
  }
  if (col.kind() != AttributeKind::numeric) {
    mask = CoverageMask(mask.size());
    return;
  }
  const auto& values = col.values();
  const double t = c.threshold;
  const bool le = c.op == Op::le;
  // NaN compares false both ways, so missing cells drop out.
  mask.for_each([&](std::size_t n) {
    const double v = values[n];
    if (!(le ? v <= t : v > t)) mask.reset(n);
  });
}

inline CoverageMask full_mask(std::size_t n) {
  CoverageMask m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i);
  return m;
}

}  // namespace detail

inline CoverageMask coverage(const Condition& c, const Dataset& dataset) {
  CoverageMask mask = detail::full_mask(dataset.size());
  detail::intersect(mask, c, dataset);
  return mask;
}

inline CoverageMask coverage(const Conjunction& conjunction, const Dataset& dataset) {
  CoverageMask mask = detail::full_mask(dataset.size());
  for (const auto& c : conjunction.conditions()) detail::intersect(mask, c, dataset);
  return mask;
}

/// Union of the conjunction masks.
inline CoverageMask coverage(const Syndrome& syndrome, const Dataset& dataset) {
  CoverageMask mask(dataset.size());
  for (const auto& c : syndrome.conjunctions()) mask |= coverage(c, dataset);
  return mask;
}

/// Per-bucket number of set bits; dropped instances are ignored.
inline CountSeries bucket_counts(const CoverageMask& mask, const TimeIndex& index) {
  CountSeries out(index.bucket_count(), 0);
  const auto& buckets = index.buckets();
  mask.for_each([&](std::size_t n) {
    const auto b = buckets[n];
    if (b != TimeIndex::kDropped) ++out[static_cast<std::size_t>(b)];
  });
  return out;
}

inline CountSeries count_series(const Syndrome& syndrome, const Dataset& dataset,
                                const TimeIndex& index,
                                Semantics semantics = Semantics::disjunctive) {
  if (semantics == Semantics::disjunctive) return bucket_counts(coverage(syndrome, dataset), index);
  CountSeries out(index.bucket_count(), 0);
  for (const auto& c : syndrome.conjunctions()) {
    const auto part = bucket_counts(coverage(c, dataset), index);
    for (std::size_t t = 0; t < out.size(); ++t) out[t] += part[t];
  }
  return out;
}

}  // namespace syndro
