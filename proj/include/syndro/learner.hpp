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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "syndro/candidates.hpp"
#include "syndro/coverage_mask.hpp"
#include "syndro/dataset.hpp"
#include "syndro/detail/parallel.hpp"
#include "syndro/error.hpp"
#include "syndro/objective.hpp"
#include "syndro/syndrome.hpp"
#include "syndro/time_index.hpp"

namespace syndro {

struct LearnerConfig {
  /// Fraction of instances every conjunction must cover, in (0, 1).
  double min_support = 0.0001;
  /// Upper bound L on the number of conjunctions.
  std::size_t max_conjunctions = 50;
  /// Upper bound M on conditions per conjunction; empty means unlimited.
  std::optional<std::size_t> max_conditions;
  ObjectiveKind objective = ObjectiveKind::pearson;
  Semantics semantics = Semantics::disjunctive;
  double improvement_epsilon = 1e-9;
  /// Attribute names or single conditions in DSL form.
  std::vector<std::string> blacklist;
  /// Restricts candidates to these schema categories (names or 1-based numbers).
  std::vector<std::string> categories;
  /// Per-attribute cap on numeric thresholds; 0 keeps every midpoint.
  std::size_t max_thresholds = 0;
  /// Recorded for reproducibility; the search itself is deterministic.
  std::uint64_t seed = 0;
  /// Worker threads for candidate scoring. Never affects results.
  std::size_t threads = 1;

  void validate() const {
    if (!(min_support > 0.0 && min_support < 1.0))
      throw ConfigError("min-support must be in (0,1)");
    if (max_conjunctions < 1) throw ConfigError("max-rules must be at least 1");
    if (max_conditions && *max_conditions < 1)
      throw ConfigError("max-conditions must be at least 1");
    if (!(improvement_epsilon >= 0.0) || !std::isfinite(improvement_epsilon))
      throw ConfigError("improvement epsilon must be a finite non-negative number");
  }
};

/// Absolute support floor ceil(n * s), at least 1. Products within 1e-9
/// (relative) of an integer snap to it, so 1,900,000 * 0.0001 gives 190.
inline std::size_t support_floor(std::size_t n, double s) {
  const double v = static_cast<double>(n) * s;
  const double r = std::nearbyint(v);
  const double floor = std::fabs(v - r) <= 1e-9 * std::max(1.0, v) ? r : std::ceil(v);
  return std::max<std::size_t>(1, static_cast<std::size_t>(floor));
}

/// Blacklist from the config entries plus every attribute outside the
/// selected categories.
inline Blacklist resolve_blacklist(const LearnerConfig& config, const Schema& schema) {
  Blacklist out = Blacklist::parse(config.blacklist, schema);
  if (config.categories.empty()) return out;
  for (const auto& c : config.categories) {
    const bool by_number = !c.empty() && std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
    const bool known = by_number ? std::stoul(c) >= 1 && std::stoul(c) <= schema.categories().size()
                                 : std::find(schema.categories().begin(), schema.categories().end(), c) !=
                                       schema.categories().end();
    if (!known) throw ConfigError("unknown category '" + c + "'");
  }
  for (std::size_t k = 0; k < schema.size(); ++k) {
    const auto number = schema.category_number(k);
    bool keep = false;
    for (const auto& c : config.categories) {
      if (!number) break;
      if (c == std::to_string(*number) || c == *schema[k].category) keep = true;
    }
    if (!keep) out.ban_attribute(k);
  }
  return out;
}

struct TraceEntry {
  Conjunction conjunction;
  std::size_t support = 0;
  /// Instances not covered by the model before this conjunction.
  std::size_t newly_covered = 0;
  double score_before = 0.0;
  double score_after = 0.0;
};

struct FitReport {
  Syndrome syndrome;
  std::vector<TraceEntry> trace;
  Score score;
  CountSeries counts;
  std::vector<std::string> labels;
  std::size_t instances = 0;
  std::size_t dropped = 0;
  std::size_t support_floor = 0;
  std::size_t candidate_count = 0;
  LearnerConfig config;
  /// Excluded from serialized reports so that they stay reproducible.
  double wall_seconds = 0.0;
};

using FitObserver = std::function<void(const TraceEntry&)>;

/// Score of the model after adding a candidate conjunction, given the current
/// count series and coverage. Does not modify anything.
inline Score evaluate_candidate(const CountSeries& current_counts, const CoverageMask& current_mask,
                                const CoverageMask& candidate_mask, const TimeIndex& index,
                                const TargetSeries& targets, Semantics semantics,
                                ObjectiveKind objective) {
  if (current_counts.size() != index.bucket_count())
    throw std::invalid_argument("count series does not match the time index");
  CountSeries next = current_counts;
  const auto added = semantics == Semantics::disjunctive
                         ? bucket_counts(candidate_mask.minus(current_mask), index)
                         : bucket_counts(candidate_mask, index);
  for (std::size_t t = 0; t < next.size(); ++t) next[t] += added[t];
  return score_model(objective, targets.counts, next);
}

namespace detail {

/// Retained instances in a compact layout plus the candidate conditions grouped
/// by attribute.
class SearchSpace {
 public:
  struct Group {
    std::size_t attribute = 0;
    bool discrete = true;
    std::vector<std::size_t> members;  // candidate indices, ascending
  };

  SearchSpace(const Dataset& dataset, const TimeIndex& index, std::vector<Condition> candidates)
      : candidates_(std::move(candidates)), bucket_count_(index.bucket_count()) {
    const auto& buckets = index.buckets();
    position_of_.assign(buckets.size(), kAbsent);
    for (std::size_t n = 0; n < buckets.size(); ++n) {
      if (buckets[n] == TimeIndex::kDropped) continue;
      position_of_[n] = static_cast<std::uint32_t>(original_.size());
      original_.push_back(static_cast<std::uint32_t>(n));
      bucket_.push_back(static_cast<std::uint32_t>(buckets[n]));
    }
    codes_.resize(dataset.attribute_count());
    values_.resize(dataset.attribute_count());
    code_of_.assign(candidates_.size(), Column::kMissing);

    for (std::size_t i = 0; i < candidates_.size(); ++i) {
      const auto& c = candidates_[i];
      if (groups_.empty() || groups_.back().attribute != c.attribute) {
        Group g;
        g.attribute = c.attribute;
        g.discrete = dataset.column(c.attribute).kind() == AttributeKind::discrete;
        groups_.push_back(std::move(g));
        load_column(dataset, c.attribute);
      }
      groups_.back().members.push_back(i);
      if (c.op == Op::eq) {
        const auto code = dataset.column(c.attribute).find_code(c.token);
        code_of_[i] = code ? *code : Column::kMissing;
      }
    }
  }

  static constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

  std::size_t size() const noexcept { return original_.size(); }
  std::size_t bucket_count() const noexcept { return bucket_count_; }
  const std::vector<Condition>& candidates() const noexcept { return candidates_; }
  const std::vector<Group>& groups() const noexcept { return groups_; }
  std::uint32_t bucket(std::size_t p) const { return bucket_[p]; }
  std::uint32_t original(std::size_t p) const { return original_[p]; }
  std::uint32_t position_of(std::size_t n) const { return position_of_.at(n); }
  const std::vector<std::int32_t>& codes(std::size_t attribute) const { return codes_[attribute]; }
  const std::vector<double>& values(std::size_t attribute) const { return values_[attribute]; }
  std::int32_t code_of(std::size_t candidate) const { return code_of_[candidate]; }

  bool matches(std::size_t candidate, std::size_t p) const {
    const auto& c = candidates_[candidate];
    if (c.op == Op::eq) {
      const auto code = code_of_[candidate];
      return code != Column::kMissing && codes_[c.attribute][p] == code;
    }
    const double v = values_[c.attribute][p];
    return c.op == Op::le ? v <= c.threshold : v > c.threshold;
  }

 private:
  void load_column(const Dataset& dataset, std::size_t k) {
    const Column& col = dataset.column(k);
    if (col.kind() == AttributeKind::discrete) {
      auto& out = codes_[k];
      out.reserve(original_.size());
      for (auto n : original_) out.push_back(col.codes()[n]);
    } else {
      auto& out = values_[k];
      out.reserve(original_.size());
      for (auto n : original_) out.push_back(col.values()[n]);
    }
  }

  std::vector<Condition> candidates_;
  std::size_t bucket_count_;
  std::vector<std::uint32_t> original_;
  std::vector<std::uint32_t> position_of_;
  std::vector<std::uint32_t> bucket_;
  std::vector<std::vector<std::int32_t>> codes_;
  std::vector<std::vector<double>> values_;
  std::vector<std::int32_t> code_of_;
  std::vector<Group> groups_;
};

struct Evaluation {
  bool scored = false;
  std::size_t support = 0;
  Score score;
};

/// Greedy search state: the current model's coverage and counts over the
/// compact positions of a SearchSpace.
class Searcher {
 public:
  struct Grown {
    Conjunction conjunction;
    Score score;
    std::size_t support = 0;
    std::vector<std::uint32_t> positions;
  };

  Searcher(const SearchSpace& space, const TargetSeries& targets, const LearnerConfig& config,
           std::size_t floor)
      : space_(space),
        targets_(targets),
        config_(config),
        floor_(floor),
        covered_(space.size(), 0),
        counts_(space.bucket_count(), 0) {
    model_score_ = score_model(config_.objective, targets_.counts, counts_);
  }

  /// Seeds the model with existing coverage (original instance indices) and counts.
  void seed_model(const CoverageMask& mask, CountSeries counts) {
    mask.for_each([&](std::size_t n) {
      const auto p = space_.position_of(n);
      if (p != SearchSpace::kAbsent) covered_[p] = 1;
    });
    counts_ = std::move(counts);
    model_score_ = score_model(config_.objective, targets_.counts, counts_);
  }

  const Score& model_score() const noexcept { return model_score_; }
  const CountSeries& counts() const noexcept { return counts_; }

  /// Top-down hill climbing for one conjunction: start from the best single
  /// condition, append conditions while the score improves on the best so far.
  /// Empty when the finished conjunction does not improve on the model.
  std::optional<Grown> grow() {
    const auto& cands = space_.candidates();
    if (cands.empty()) return std::nullopt;
    const double eps = config_.improvement_epsilon;

    evaluate(nullptr, nullptr);
    auto best = select();
    if (!best) return std::nullopt;

    Grown g;
    g.conjunction = Conjunction({cands[*best]});
    g.score = evals_[*best].score;
    g.support = evals_[*best].support;
    for (std::size_t p = 0; p < space_.size(); ++p)
      if (space_.matches(*best, p)) g.positions.push_back(static_cast<std::uint32_t>(p));

    const std::size_t limit = config_.max_conditions.value_or(cands.size() + 1);
    while (g.conjunction.size() < limit) {
      evaluate(&g.positions, &g.conjunction);
      auto next = select();
      if (!next || !(evals_[*next].score.value > g.score.value + eps)) break;
      g.conjunction.append(cands[*next]);
      g.score = evals_[*next].score;
      g.support = evals_[*next].support;
      std::erase_if(g.positions, [&](std::uint32_t p) { return !space_.matches(*next, p); });
    }
    if (!(g.score.value > model_score_.value + eps)) return std::nullopt;
    return g;
  }

  /// Adds a grown conjunction to the model; returns the number of newly
  /// covered instances.
  std::size_t commit(const Grown& g) {
    std::size_t fresh = 0;
    for (auto p : g.positions) {
      if (!covered_[p]) ++fresh;
      if (config_.semantics == Semantics::additive || !covered_[p]) ++counts_[space_.bucket(p)];
      covered_[p] = 1;
    }
    model_score_ = score_model(config_.objective, targets_.counts, counts_);
    return fresh;
  }

 private:
  /// Scores every admissible candidate restricted to `base` (all positions
  /// when null) and appended to `conj` (a fresh conjunction when null).
  void evaluate(const std::vector<std::uint32_t>* base, const Conjunction* conj) {
    const auto& groups = space_.groups();
    evals_.assign(space_.candidates().size(), Evaluation{});
    parallel_for(groups.size(), std::max<std::size_t>(1, config_.threads),
                 [&](std::size_t gi) { evaluate_group(groups[gi], base, conj); });
  }

  bool admissible(std::size_t candidate, const Conjunction* conj) const {
    return !conj || conj->can_append(space_.candidates()[candidate]);
  }

  template <typename F>
  void for_base(const std::vector<std::uint32_t>* base, F&& f) const {
    if (base) {
      for (auto p : *base) f(p);
    } else {
      for (std::size_t p = 0; p < space_.size(); ++p) f(static_cast<std::uint32_t>(p));
    }
  }

  bool counts_toward(std::uint32_t p) const {
    return config_.semantics == Semantics::additive || !covered_[p];
  }

  Score score_with(const CountSeries& yhat) const {
    return score_model(config_.objective, targets_.counts, yhat);
  }

  void evaluate_group(const SearchSpace::Group& group, const std::vector<std::uint32_t>* base,
                      const Conjunction* conj) {
    std::vector<std::size_t> members;
    for (auto i : group.members)
      if (admissible(i, conj)) members.push_back(i);
    if (members.empty()) return;
    if (group.discrete)
      evaluate_discrete(group, members, base);
    else
      evaluate_numeric(group, members, base);
  }

  void evaluate_discrete(const SearchSpace::Group& group, const std::vector<std::size_t>& members,
                         const std::vector<std::uint32_t>* base) {
    const auto& codes = space_.codes(group.attribute);
    std::int32_t max_code = -1;
    for (auto i : members) max_code = std::max(max_code, space_.code_of(i));
    if (max_code < 0) return;
    const auto width = static_cast<std::size_t>(max_code) + 1;

    // Counting sort of the buckets that each token would add.
    std::vector<std::size_t> support(width, 0), offset(width + 1, 0);
    for_base(base, [&](std::uint32_t p) {
      const auto c = codes[p];
      if (c < 0 || c > max_code) return;
      ++support[static_cast<std::size_t>(c)];
      if (counts_toward(p)) ++offset[static_cast<std::size_t>(c) + 1];
    });
    for (std::size_t c = 0; c < width; ++c) offset[c + 1] += offset[c];
    std::vector<std::uint32_t> added(offset[width]);
    std::vector<std::size_t> cursor(offset.begin(), offset.end() - 1);
    for_base(base, [&](std::uint32_t p) {
      const auto c = codes[p];
      if (c < 0 || c > max_code || !counts_toward(p)) return;
      added[cursor[static_cast<std::size_t>(c)]++] = space_.bucket(p);
    });

    CountSeries yhat;
    for (auto i : members) {
      const auto code = space_.code_of(i);
      if (code < 0) continue;
      const auto c = static_cast<std::size_t>(code);
      Evaluation& e = evals_[i];
      e.support = support[c];
      if (e.support < floor_) continue;
      yhat = counts_;
      for (std::size_t j = offset[c]; j < offset[c + 1]; ++j) ++yhat[added[j]];
      e.score = score_with(yhat);
      e.scored = true;
    }
  }

  void evaluate_numeric(const SearchSpace::Group& group, const std::vector<std::size_t>& members,
                        const std::vector<std::uint32_t>* base) {
    const auto& values = space_.values(group.attribute);
    struct Item {
      double value;
      std::uint32_t bucket;
      bool counts;
    };
    std::vector<Item> items;
    for_base(base, [&](std::uint32_t p) {
      const double v = values[p];
      if (!std::isnan(v)) items.push_back({v, space_.bucket(p), counts_toward(p)});
    });
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.value < b.value; });

    CountSeries total(space_.bucket_count(), 0);
    for (const auto& it : items)
      if (it.counts) ++total[it.bucket];

    std::vector<std::size_t> order = members;
    const auto& cands = space_.candidates();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cands[a].threshold < cands[b].threshold;
    });

    CountSeries below(space_.bucket_count(), 0);  // counted items with value <= threshold
    std::size_t below_support = 0, cursor = 0;
    CountSeries yhat(space_.bucket_count());
    for (auto i : order) {
      const double t = cands[i].threshold;
      while (cursor < items.size() && items[cursor].value <= t) {
        if (items[cursor].counts) ++below[items[cursor].bucket];
        ++below_support;
        ++cursor;
      }
      const bool le = cands[i].op == Op::le;
      Evaluation& e = evals_[i];
      e.support = le ? below_support : items.size() - below_support;
      if (e.support < floor_) continue;
      for (std::size_t b = 0; b < yhat.size(); ++b)
        yhat[b] = counts_[b] + (le ? below[b] : total[b] - below[b]);
      e.score = score_with(yhat);
      e.scored = true;
    }
  }

  /// Highest score, then higher support, then earlier candidate.
  std::optional<std::size_t> select() const {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < evals_.size(); ++i) {
      const auto& e = evals_[i];
      if (!e.scored || e.score.degenerate) continue;
      if (!best) {
        best = i;
        continue;
      }
      const auto& b = evals_[*best];
      if (e.score.value > b.score.value ||
          (e.score.value == b.score.value && e.support > b.support))
        best = i;
    }
    return best;
  }

  const SearchSpace& space_;
  const TargetSeries& targets_;
  const LearnerConfig& config_;
  std::size_t floor_;
  std::vector<char> covered_;
  CountSeries counts_;
  Score model_score_;
  std::vector<Evaluation> evals_;
};

inline void check_fit_inputs(const Dataset& dataset, const TimeIndex& index,
                             const TargetSeries& targets) {
  if (index.instance_count() != dataset.size())
    throw DataError("time index was built over a different dataset");
  if (targets.size() != index.bucket_count())
    throw DataError("target series length does not match the time index");
  if (targets.size() < 2) throw DataError("at least two time buckets are required");
  if (index.retained() == 0) throw DataError("no instance falls inside the target range");
}

}  // namespace detail

/// Grows one conjunction against an existing model given as coverage mask and
/// count series. Empty when nothing improves the model.
inline std::optional<std::pair<Conjunction, Score>> grow_conjunction(
    const Dataset& dataset, const TimeIndex& index, const TargetSeries& targets,
    const CoverageMask& current_mask, const CountSeries& current_counts, const LearnerConfig& config) {
  config.validate();
  detail::check_fit_inputs(dataset, index, targets);
  const std::size_t floor = support_floor(index.retained(), config.min_support);
  auto candidates = candidate_conditions(dataset, floor, resolve_blacklist(config, dataset.schema()),
                                         config.max_thresholds);
  detail::SearchSpace space(dataset, index, std::move(candidates));
  detail::Searcher searcher(space, targets, config, floor);
  searcher.seed_model(current_mask, current_counts);
  auto g = searcher.grow();
  if (!g) return std::nullopt;
  return std::make_pair(std::move(g->conjunction), g->score);
}

/// Sequential covering: starting from the empty model, repeatedly adds the
/// conjunction found by hill climbing until none improves the score or L
/// conjunctions have been learned.
inline FitReport fit(const Dataset& dataset, const TimeIndex& index, const TargetSeries& targets,
                     const LearnerConfig& config, const FitObserver& observer = {}) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  detail::check_fit_inputs(dataset, index, targets);

  FitReport report;
  report.config = config;
  report.labels = index.labels();
  report.instances = index.retained();
  report.dropped = index.dropped();
  report.support_floor = support_floor(index.retained(), config.min_support);

  auto candidates = candidate_conditions(dataset, report.support_floor,
                                         resolve_blacklist(config, dataset.schema()),
                                         config.max_thresholds);
  report.candidate_count = candidates.size();
  detail::SearchSpace space(dataset, index, std::move(candidates));
  detail::Searcher searcher(space, targets, config, report.support_floor);

  while (report.trace.size() < config.max_conjunctions) {
    auto g = searcher.grow();
    if (!g) break;
    TraceEntry entry;
    entry.score_before = searcher.model_score().value;
    entry.newly_covered = searcher.commit(*g);
    entry.score_after = searcher.model_score().value;
    entry.support = g->support;
    entry.conjunction = g->conjunction;
    report.syndrome.append(std::move(g->conjunction));
    report.trace.push_back(entry);
    if (observer) observer(report.trace.back());
  }

  report.counts = searcher.counts();
  report.score = searcher.model_score();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace syndro
