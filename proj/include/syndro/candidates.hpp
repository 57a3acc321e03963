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
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "syndro/dataset.hpp"
#include "syndro/dsl.hpp"
#include "syndro/error.hpp"
#include "syndro/syndrome.hpp"

namespace syndro {

/// Attributes and individual conditions excluded from the search.
class Blacklist {
 public:
  Blacklist() = default;

  /// Each entry is an attribute name (`icd`) or one condition (`icd = "Z96.0"`).
  static Blacklist parse(const std::vector<std::string>& entries, const Schema& schema) {
    Blacklist out;
    for (const auto& raw : entries) {
      const std::string entry(detail::trim(raw));
      if (entry.empty()) continue;
      if (auto k = schema.find(entry)) {
        out.ban_attribute(*k);
        continue;
      }
      try {
        out.ban(parse_condition(entry, schema));
      } catch (const SyntaxError& e) {
        throw ConfigError("invalid blacklist entry '" + entry + "': " + e.detail());
      }
    }
    return out;
  }

  void ban_attribute(std::size_t k) { attributes_.insert(k); }
  void ban(Condition c) {
    if (std::find(conditions_.begin(), conditions_.end(), c) == conditions_.end())
      conditions_.push_back(std::move(c));
  }

  bool bans_attribute(std::size_t k) const { return attributes_.count(k) != 0; }

  bool bans(const Condition& c) const {
    return bans_attribute(c.attribute) ||
           std::find(conditions_.begin(), conditions_.end(), c) != conditions_.end();
  }

  /// True when no condition of `syndrome` is banned.
  bool admits(const Syndrome& syndrome) const {
    for (const auto& conj : syndrome.conjunctions())
      for (const auto& c : conj.conditions())
        if (bans(c)) return false;
    return true;
  }

  const std::set<std::size_t>& attributes() const noexcept { return attributes_; }
  const std::vector<Condition>& conditions() const noexcept { return conditions_; }

  /// Entries in the textual form accepted by parse().
  std::vector<std::string> entries(const Schema& schema) const {
    std::vector<std::string> out;
    for (auto k : attributes_) out.push_back(schema[k].name);
    for (const auto& c : conditions_) out.push_back(format_condition(c, schema));
    return out;
  }

 private:
  std::set<std::size_t> attributes_;
  std::vector<Condition> conditions_;
};

/// One entry per non-blank line; `#` starts a comment line.
inline std::vector<std::string> read_blacklist_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open blacklist file '" + path.string() + "'");
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

namespace detail {

inline double split_point(double lo, double hi) {
  const double mid = std::midpoint(lo, hi);
  return mid < hi ? mid : lo;
}

}  // namespace detail

/// Every admissible atomic condition with support >= `min_support_count`,
/// ordered by attribute, operator (= < <= < >) and value. Numeric thresholds
/// sit midway between adjacent distinct observed values; `max_thresholds` > 0
/// keeps at most that many per attribute, spread by equal frequency.
inline std::vector<Condition> candidate_conditions(const Dataset& dataset,
                                                   std::size_t min_support_count,
                                                   const Blacklist& blacklist = {},
                                                   std::size_t max_thresholds = 0) {
  if (min_support_count < 1) throw ConfigError("min_support_count must be at least 1");
  std::vector<Condition> out;
  const Schema& schema = dataset.schema();
  for (std::size_t k = 0; k < dataset.attribute_count(); ++k) {
    if (schema[k].blacklisted || blacklist.bans_attribute(k)) continue;
    const Column& col = dataset.column(k);
    if (col.kind() == AttributeKind::discrete) {
      std::vector<std::size_t> support(col.dictionary().size(), 0);
      for (auto c : col.codes())
        if (c != Column::kMissing) ++support[static_cast<std::size_t>(c)];
      for (std::size_t v = 0; v < support.size(); ++v) {
        if (support[v] < min_support_count) continue;
        Condition c = Condition::eq(k, col.dictionary()[v]);
        if (!blacklist.bans(c)) out.push_back(std::move(c));
      }
      continue;
    }

    std::vector<double> values;
    for (double v : col.values())
      if (!std::isnan(v)) values.push_back(v);
    std::sort(values.begin(), values.end());
    const std::size_t present = values.size();
    // (threshold, number of values <= threshold)
    std::vector<std::pair<double, std::size_t>> splits;
    for (std::size_t i = 0; i + 1 < present; ++i)
      if (values[i] < values[i + 1]) splits.emplace_back(detail::split_point(values[i], values[i + 1]), i + 1);

    if (max_thresholds > 0 && splits.size() > max_thresholds) {
      std::vector<std::pair<double, std::size_t>> kept;
      for (std::size_t q = 1; q <= max_thresholds; ++q) {
        const double target = static_cast<double>(q) * static_cast<double>(present) /
                              static_cast<double>(max_thresholds + 1);
        auto it = std::lower_bound(splits.begin(), splits.end(), target,
                                   [](const auto& s, double t) { return static_cast<double>(s.second) < t; });
        if (it == splits.end()) it = std::prev(splits.end());
        if (kept.empty() || kept.back().first != it->first) kept.push_back(*it);
      }
      splits = std::move(kept);
    }

    for (const auto& [t, below] : splits) {
      if (below < min_support_count) continue;
      Condition c = Condition::le(k, t);
      if (!blacklist.bans(c)) out.push_back(std::move(c));
    }
    for (const auto& [t, below] : splits) {
      if (present - below < min_support_count) continue;
      Condition c = Condition::gt(k, t);
      if (!blacklist.bans(c)) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace syndro
