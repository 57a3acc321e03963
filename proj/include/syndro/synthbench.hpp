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
#include <cstdio>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "syndro/calendar.hpp"
#include "syndro/dataset.hpp"
#include "syndro/detail/parallel.hpp"
#include "syndro/dsl.hpp"
#include "syndro/error.hpp"
#include "syndro/learner.hpp"
#include "syndro/syndrome.hpp"
#include "syndro/time_index.hpp"

namespace syndro {

/// Shapes of planted syndromes: one conjunction (AND), a disjunction of single
/// conditions (OR) or a disjunction of two-condition conjunctions (AND-OR).
enum class SyndromeType { and_type, or_type, and_or };

inline std::string to_string(SyndromeType t) {
  switch (t) {
    case SyndromeType::and_type:
      return "and";
    case SyndromeType::or_type:
      return "or";
    case SyndromeType::and_or:
      return "and-or";
  }
  return "or";
}

inline SyndromeType parse_syndrome_type(std::string_view text) {
  if (text == "and") return SyndromeType::and_type;
  if (text == "or") return SyndromeType::or_type;
  if (text == "and-or" || text == "and_or") return SyndromeType::and_or;
  throw ConfigError("unknown syndrome type '" + std::string(text) + "' (expected and, or or and-or)");
}

/// Inclusive range of the size parameter: M for AND, L otherwise.
inline std::pair<std::size_t, std::size_t> size_range(SyndromeType t) {
  switch (t) {
    case SyndromeType::and_type:
      return {2, 3};
    case SyndromeType::or_type:
      return {2, 9};
    case SyndromeType::and_or:
      return {2, 5};
  }
  return {2, 2};
}

struct SyntheticSpec {
  SyndromeType type = SyndromeType::or_type;
  std::size_t size = 2;
  std::size_t min_indicator_support = 200;
  std::size_t trials = 100;
  Granularity granularity = Granularity::daily;
  std::uint64_t seed = 0;

  void validate() const {
    const auto [lo, hi] = size_range(type);
    if (size < lo || size > hi)
      throw ConfigError("size " + std::to_string(size) + " outside [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "] for type " + to_string(type));
    if (min_indicator_support < 1) throw ConfigError("min indicator support must be at least 1");
    if (trials < 1) throw ConfigError("trials must be at least 1");
  }
};

class SamplingExhausted : public DataError {
 public:
  using DataError::DataError;
};

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits.
inline double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::size_t below(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(unit(rng) * static_cast<double>(n));
}

inline std::string padded(char prefix, std::size_t i, std::size_t count) {
  const int width = static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
  return buf;
}

}  // namespace detail

/// How synthetic instances are spread over the date range: independently
/// uniform days, or an equal share per day (counts differ by at most one).
enum class DateSpread { random, balanced };

/// Discrete-only dataset: attribute `aK` draws token `vJ` with probability
/// proportional to 1/(J+1)^zipf_exponent; dates are uniform over [first, last].
inline Dataset gen_synthetic_dataset(std::size_t n_instances, std::size_t n_attributes,
                                     std::size_t n_values, Date first, Date last,
                                     std::uint64_t seed, double zipf_exponent = 1.0,
                                     DateSpread spread = DateSpread::balanced) {
  if (n_instances < 1 || n_attributes < 1 || n_values < 1)
    throw ConfigError("synthetic dataset parameters must be at least 1");
  if (last < first) throw ConfigError("synthetic date range is empty");
  std::mt19937_64 rng(seed);

  std::vector<double> cdf(n_values);
  double total = 0;
  for (std::size_t v = 0; v < n_values; ++v) {
    total += 1.0 / std::pow(static_cast<double>(v + 1), zipf_exponent);
    cdf[v] = total;
  }
  for (auto& c : cdf) c /= total;

  std::vector<std::string> dictionary;
  for (std::size_t v = 0; v < n_values; ++v) dictionary.push_back(detail::padded('v', v, n_values));
  std::vector<AttributeSchema> attrs;
  std::vector<Column> columns;
  for (std::size_t k = 0; k < n_attributes; ++k) {
    attrs.push_back({detail::padded('a', k, n_attributes), AttributeKind::discrete, std::nullopt, false});
    std::vector<std::int32_t> codes(n_instances);
    for (auto& c : codes) {
      const double u = detail::unit(rng);
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      if (it == cdf.end()) --it;
      c = static_cast<std::int32_t>(it - cdf.begin());
    }
    columns.push_back(Column::discrete(dictionary, std::move(codes)));
  }
  const auto span = static_cast<std::size_t>((last - first).count() + 1);
  std::vector<Date> dates(n_instances);
  if (spread == DateSpread::random) {
    for (auto& d : dates) d = first + std::chrono::days{static_cast<int>(detail::below(rng, span))};
  } else {
    // Values are drawn independently of the date; every day gets an equal share.
    for (std::size_t n = 0; n < n_instances; ++n)
      dates[n] = first + std::chrono::days{static_cast<int>(n % span)};
  }
  return Dataset(Schema(std::move(attrs)), std::move(columns), std::move(dates));
}

/// Draws a random syndrome of the requested shape from the equality
/// indicators present in the data. Every condition and every conjunction
/// covers at least `min_indicator_support` instances and no condition repeats.
inline Syndrome sample_syndrome(const Dataset& dataset, const SyntheticSpec& spec,
                                std::mt19937_64& rng, std::size_t max_attempts = 10000) {
  spec.validate();
  std::vector<Condition> pool;
  for (std::size_t k = 0; k < dataset.attribute_count(); ++k) {
    const Column& col = dataset.column(k);
    if (col.kind() != AttributeKind::discrete) continue;
    std::vector<std::size_t> support(col.dictionary().size(), 0);
    for (auto c : col.codes())
      if (c != Column::kMissing) ++support[static_cast<std::size_t>(c)];
    for (std::size_t v = 0; v < support.size(); ++v)
      if (support[v] >= spec.min_indicator_support) pool.push_back(Condition::eq(k, col.dictionary()[v]));
  }

  const std::size_t per_conj = spec.type == SyndromeType::and_type ? spec.size
                               : spec.type == SyndromeType::and_or ? 2
                                                                   : 1;
  const std::size_t conj_count = spec.type == SyndromeType::and_type ? 1 : spec.size;

  auto draw_conjunction = [&](std::vector<Condition>& used) -> std::optional<Conjunction> {
    Conjunction conj;
    for (std::size_t i = 0; i < per_conj; ++i) {
      const Condition& c = pool[detail::below(rng, pool.size())];
      if (std::find(used.begin(), used.end(), c) != used.end() || !conj.can_append(c)) return std::nullopt;
      conj.append(c);
      used.push_back(c);
    }
    if (per_conj > 1 && coverage(conj, dataset).count() < spec.min_indicator_support) return std::nullopt;
    return conj;
  };

  if (pool.size() >= per_conj * conj_count) {
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
      std::vector<Condition> used;
      std::vector<Conjunction> conjunctions;
      for (std::size_t l = 0; l < conj_count; ++l) {
        // Resample a single conjunction a few times before restarting.
        std::optional<Conjunction> conj;
        for (int retry = 0; retry < 20 && !conj; ++retry) {
          auto saved = used;
          conj = draw_conjunction(used);
          if (!conj) used = std::move(saved);
        }
        if (!conj) break;
        conjunctions.push_back(std::move(*conj));
      }
      if (conjunctions.size() == conj_count) return Syndrome(std::move(conjunctions));
    }
  }
  throw SamplingExhausted("could not sample a " + to_string(spec.type) + " syndrome of size " +
                          std::to_string(spec.size) + " with support >= " +
                          std::to_string(spec.min_indicator_support) + " after " +
                          std::to_string(max_attempts) + " attempts");
}

inline Syndrome sample_syndrome(const Dataset& dataset, const SyntheticSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  return sample_syndrome(dataset, spec, rng);
}

struct TrialResult {
  Syndrome planted;
  Syndrome learned;
  bool reconstructed = false;
  double planted_score = 0.0;
  double learned_score = 0.0;
  std::size_t size = 0;
};

/// Uses the planted syndrome's own count series as the target and checks
/// whether the learner finds exactly the same indicators.
inline TrialResult run_trial(const Dataset& dataset, const Syndrome& planted, Granularity granularity,
                             const LearnerConfig& config, double noise = 0.0,
                             std::uint64_t noise_seed = 0) {
  const TimeIndex index = TimeIndex::spanning(dataset, granularity);
  auto y = count_series(planted, dataset, index, Semantics::disjunctive);
  if (noise > 0.0) {
    std::mt19937_64 rng(noise_seed);
    double mean = 0;
    for (auto v : y) mean += static_cast<double>(v);
    mean /= static_cast<double>(y.size());
    std::poisson_distribution<std::int64_t> extra(noise * mean);
    for (auto& v : y) v += extra(rng);
  }
  const auto targets = TargetSeries::from_counts(granularity, index.first_key(), y);
  TrialResult r;
  r.planted = planted;
  r.size = planted.size() == 1 ? planted[0].size() : planted.size();
  r.planted_score =
      score_model(config.objective, targets.counts, count_series(planted, dataset, index)).value;
  const FitReport report = fit(dataset, index, targets, config);
  r.learned = report.syndrome;
  r.learned_score = report.score.value;
  r.reconstructed = same_indicators(r.learned, planted);
  return r;
}

inline double reconstruction_rate(std::span<const TrialResult> results) {
  if (results.empty()) throw std::invalid_argument("reconstruction rate of an empty trial set");
  const auto ok = std::count_if(results.begin(), results.end(), [](const auto& r) { return r.reconstructed; });
  return static_cast<double>(ok) / static_cast<double>(results.size());
}

struct BenchmarkOptions {
  std::size_t instances = 100000;
  std::size_t attributes = 30;
  std::size_t values = 5;
  double zipf_exponent = 1.0;
  DateSpread spread = DateSpread::balanced;
  Date first_date = std::chrono::sys_days{std::chrono::year{2018} / 1 / 1};
  Date last_date = std::chrono::sys_days{std::chrono::year{2018} / 12 / 31};
  std::vector<SyndromeType> types{SyndromeType::and_type, SyndromeType::or_type, SyndromeType::and_or};
  std::vector<Granularity> granularities{Granularity::daily, Granularity::weekly, Granularity::monthly};
  /// When set, every trial uses this size; otherwise sizes cycle through the type's range.
  std::optional<std::size_t> size;
  std::size_t trials = 100;
  std::size_t min_indicator_support = 200;
  std::uint64_t seed = 1;
  double noise = 0.0;
  LearnerConfig learner;
  /// Trials run concurrently on this many workers (each fit single-threaded).
  std::size_t threads = 1;
};

struct BenchmarkCell {
  SyndromeType type;
  Granularity granularity;
  std::vector<TrialResult> results;

  double rate() const { return reconstruction_rate(results); }
};

struct BenchmarkReport {
  std::vector<BenchmarkCell> cells;
  std::size_t instances = 0;
  std::size_t attributes = 0;
  std::size_t values = 0;
  double wall_seconds = 0.0;

  const BenchmarkCell* find(SyndromeType t, Granularity g) const {
    for (const auto& c : cells)
      if (c.type == t && c.granularity == g) return &c;
    return nullptr;
  }
};

/// Planted syndromes for one type; the same list is reused for every granularity.
inline std::vector<Syndrome> plant_trials(const Dataset& dataset, SyndromeType type,
                                          const BenchmarkOptions& options) {
  std::mt19937_64 rng(options.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(type) + 1);
  const auto [lo, hi] = size_range(type);
  std::vector<Syndrome> out;
  for (std::size_t i = 0; i < options.trials; ++i) {
    SyntheticSpec spec;
    spec.type = type;
    spec.size = options.size ? *options.size : lo + i % (hi - lo + 1);
    spec.min_indicator_support = options.min_indicator_support;
    out.push_back(sample_syndrome(dataset, spec, rng));
  }
  return out;
}

inline BenchmarkReport run_benchmark(const Dataset& dataset, const BenchmarkOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  options.learner.validate();
  BenchmarkReport report;
  report.instances = dataset.size();
  report.attributes = dataset.attribute_count();
  report.values = options.values;
  LearnerConfig config = options.learner;
  config.threads = 1;
  for (auto type : options.types) {
    const auto planted = plant_trials(dataset, type, options);
    for (auto g : options.granularities) {
      BenchmarkCell cell{type, g, std::vector<TrialResult>(planted.size())};
      detail::parallel_for(planted.size(), options.threads, [&](std::size_t i) {
        cell.results[i] = run_trial(dataset, planted[i], g, config, options.noise, options.seed + i);
      });
      report.cells.push_back(std::move(cell));
    }
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline Dataset benchmark_dataset(const BenchmarkOptions& options) {
  return gen_synthetic_dataset(options.instances, options.attributes, options.values, options.first_date,
                               options.last_date, options.seed, options.zipf_exponent, options.spread);
}

inline nlohmann::json to_json(const BenchmarkReport& report, const Schema& schema,
                              bool include_trials = false) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& cell : report.cells) {
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_size;  // size -> (ok, total)
    double score_sum = 0;
    for (const auto& r : cell.results) {
      auto& s = by_size[r.size];
      s.first += r.reconstructed ? 1 : 0;
      ++s.second;
      score_sum += r.learned_score;
    }
    nlohmann::json sizes = nlohmann::json::object();
    for (const auto& [size, counts] : by_size)
      sizes[std::to_string(size)] = static_cast<double>(counts.first) / static_cast<double>(counts.second);
    nlohmann::json c{{"type", to_string(cell.type)},
                     {"granularity", to_string(cell.granularity)},
                     {"trials", cell.results.size()},
                     {"reconstruction_rate", cell.rate()},
                     {"mean_learned_score", score_sum / static_cast<double>(cell.results.size())},
                     {"rate_by_size", std::move(sizes)}};
    if (include_trials) {
      nlohmann::json trials = nlohmann::json::array();
      for (const auto& r : cell.results)
        trials.push_back({{"planted", format_syndrome(r.planted, schema)},
                          {"learned", format_syndrome(r.learned, schema)},
                          {"reconstructed", r.reconstructed},
                          {"learned_score", r.learned_score}});
      c["trials_detail"] = std::move(trials);
    }
    cells.push_back(std::move(c));
  }
  return {{"instances", report.instances},
          {"attributes", report.attributes},
          {"values_per_attribute", report.values},
          {"cells", std::move(cells)}};
}

/// Reconstruction rates as a table: one row per type, one column per granularity.
inline std::string format_table(const BenchmarkReport& report) {
  std::vector<SyndromeType> types;
  std::vector<Granularity> grans;
  for (const auto& c : report.cells) {
    if (std::find(types.begin(), types.end(), c.type) == types.end()) types.push_back(c.type);
    if (std::find(grans.begin(), grans.end(), c.granularity) == grans.end()) grans.push_back(c.granularity);
  }
  std::string out = "type    ";
  char buf[64];
  for (auto g : grans) {
    std::snprintf(buf, sizeof buf, "%10s", to_string(g).c_str());
    out += buf;
  }
  out += '\n';
  for (auto t : types) {
    std::snprintf(buf, sizeof buf, "%-8s", to_string(t).c_str());
    out += buf;
    for (auto g : grans) {
      const auto* cell = report.find(t, g);
      std::snprintf(buf, sizeof buf, "%9.1f%%", cell ? 100.0 * cell->rate() : 0.0);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace syndro
