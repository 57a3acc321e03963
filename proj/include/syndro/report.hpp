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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "syndro/dataset.hpp"
#include "syndro/dsl.hpp"
#include "syndro/learner.hpp"
#include "syndro/objective.hpp"
#include "syndro/syndrome.hpp"

namespace syndro {

using nlohmann::json;

/// Resolved learner settings. `threads` is deliberately absent: reports must
/// not depend on it.
inline json to_json(const LearnerConfig& c) {
  json out{{"min_support", c.min_support},
           {"max_rules", c.max_conjunctions},
           {"max_conditions", c.max_conditions ? json(*c.max_conditions) : json(nullptr)},
           {"objective", to_string(c.objective)},
           {"semantics", to_string(c.semantics)},
           {"improvement_epsilon", c.improvement_epsilon},
           {"blacklist", c.blacklist},
           {"categories", c.categories},
           {"max_thresholds", c.max_thresholds},
           {"seed", c.seed}};
  return out;
}

/// Applies the fields present in `delta` on top of `base`. Unknown fields are
/// rejected.
inline LearnerConfig apply_config(LearnerConfig base, const json& delta) {
  if (delta.is_null()) return base;
  if (!delta.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, value] : delta.items()) {
      if (key == "min_support")
        base.min_support = value.get<double>();
      else if (key == "max_rules")
        base.max_conjunctions = value.get<std::size_t>();
      else if (key == "max_conditions")
        base.max_conditions = value.is_null() ? std::nullopt
                                              : std::optional<std::size_t>(value.get<std::size_t>());
      else if (key == "objective")
        base.objective = parse_objective(value.get<std::string>());
      else if (key == "semantics")
        base.semantics = parse_semantics(value.get<std::string>());
      else if (key == "improvement_epsilon")
        base.improvement_epsilon = value.get<double>();
      else if (key == "blacklist")
        base.blacklist = value.get<std::vector<std::string>>();
      else if (key == "categories")
        base.categories = value.get<std::vector<std::string>>();
      else if (key == "max_thresholds")
        base.max_thresholds = value.get<std::size_t>();
      else if (key == "seed")
        base.seed = value.get<std::uint64_t>();
      else if (key == "threads")
        base.threads = value.get<std::size_t>();
      else
        throw ConfigError("unknown config field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
  return base;
}

inline json to_json(const Score& s) { return json{{"value", s.value}, {"degenerate", s.degenerate}}; }

inline json all_scores(std::span<const std::int64_t> y, std::span<const std::int64_t> yhat) {
  return json{{"pearson", pearson_abs(y, yhat).value},
              {"spearman", spearman_abs(y, yhat).value},
              {"kendall", kendall_abs(y, yhat).value}};
}

inline json syndrome_to_json(const Syndrome& s, const Schema& schema) {
  json conjunctions = json::array();
  for (const auto& conj : s.conjunctions()) {
    json conds = json::array();
    for (const auto& c : conj.conditions()) conds.push_back(format_condition(c, schema));
    conjunctions.push_back(std::move(conds));
  }
  return json{{"text", format_syndrome(s, schema)}, {"conjunctions", std::move(conjunctions)}};
}

inline json to_json(const FitReport& r, const Schema& schema, bool include_timing = false) {
  json trace = json::array();
  for (const auto& e : r.trace)
    trace.push_back(json{{"conjunction", format_conjunction(e.conjunction, schema)},
                         {"support", e.support},
                         {"newly_covered", e.newly_covered},
                         {"score_before", e.score_before},
                         {"score_after", e.score_after}});
  json out{{"syndrome", syndrome_to_json(r.syndrome, schema)},
           {"score", to_json(r.score)},
           {"trace", std::move(trace)},
           {"labels", r.labels},
           {"counts", r.counts},
           {"instances", r.instances},
           {"dropped", r.dropped},
           {"support_floor", r.support_floor},
           {"candidate_count", r.candidate_count},
           {"config", to_json(r.config)}};
  if (include_timing) out["wall_seconds"] = r.wall_seconds;
  return out;
}

}  // namespace syndro
