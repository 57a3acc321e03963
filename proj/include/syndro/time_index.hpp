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

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "syndro/calendar.hpp"
#include "syndro/dataset.hpp"
#include "syndro/detail/csv.hpp"
#include "syndro/error.hpp"

namespace syndro {

/// Reported case counts for a contiguous run of calendar buckets.
struct TargetSeries {
  Granularity granularity = Granularity::weekly;
  std::int64_t first_key = 0;
  std::vector<std::string> labels;
  std::vector<std::int64_t> counts;

  std::size_t size() const noexcept { return counts.size(); }

  static TargetSeries from_counts(Granularity g, std::int64_t first_key,
                                  std::vector<std::int64_t> counts) {
    TargetSeries t;
    t.granularity = g;
    t.first_key = first_key;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] < 0) throw DataError("negative count at " + bucket_label(first_key + static_cast<std::int64_t>(i), g));
      t.labels.push_back(bucket_label(first_key + static_cast<std::int64_t>(i), g));
    }
    t.counts = std::move(counts);
    return t;
  }
};

/// Parses `bucket,count` rows (an optional header whose first field is
/// `bucket` is skipped). Labels must be ascending and gap-free.
inline TargetSeries read_targets(std::istream& in, Granularity g) {
  detail::DelimitedReader reader(in);
  std::vector<std::string> fields;
  TargetSeries out;
  out.granularity = g;
  bool first_line = true;
  bool first = true;
  std::int64_t expected = 0;
  while (reader.next(fields)) {
    const bool header = first_line && !fields.empty() && detail::trim(fields[0]) == "bucket";
    first_line = false;
    if (header) continue;
    if (fields.size() != 2)
      throw DataError("targets line " + std::to_string(reader.line_number()) +
                      ": expected two columns 'bucket,count'");
    const auto label = std::string(detail::trim(fields[0]));
    const auto count_text = detail::trim(fields[1]);
    const std::int64_t key = parse_bucket_label(label, g);
    std::int64_t count = 0;
    auto [ptr, ec] = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (ec != std::errc() || ptr != count_text.data() + count_text.size())
      throw DataError("targets line " + std::to_string(reader.line_number()) +
                      ": count '" + std::string(count_text) + "' is not an integer");
    if (count < 0) throw DataError("negative count at " + label);
    if (first) {
      out.first_key = key;
      expected = key;
      first = false;
    }
    if (key > expected) throw DataError("gap at " + bucket_label(expected, g));
    if (key < expected) throw DataError("bucket " + label + " is duplicated or out of order");
    out.labels.push_back(bucket_label(key, g));
    out.counts.push_back(count);
    ++expected;
  }
  if (out.counts.empty()) throw DataError("targets file has no rows");
  return out;
}

inline TargetSeries load_targets(const std::filesystem::path& path, Granularity g) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open targets file '" + path.string() + "'");
  return read_targets(in, g);
}

/// Maps every instance to a bucket in [0, T) or marks it dropped (-1) when its
/// date falls outside the covered range.
class TimeIndex {
 public:
  static constexpr std::int32_t kDropped = -1;

  TimeIndex(const Dataset& dataset, Granularity g, std::int64_t first_key, std::size_t bucket_count)
      : granularity_(g), first_key_(first_key), bucket_count_(bucket_count) {
    if (bucket_count == 0) throw DataError("time index needs at least one bucket");
    labels_.reserve(bucket_count);
    for (std::size_t t = 0; t < bucket_count; ++t)
      labels_.push_back(bucket_label(first_key + static_cast<std::int64_t>(t), g));
    bucket_of_.resize(dataset.size());
    const auto T = static_cast<std::int64_t>(bucket_count);
    for (std::size_t n = 0; n < dataset.size(); ++n) {
      const std::int64_t rel = bucket_key(dataset.date(n), g) - first_key;
      if (rel < 0 || rel >= T) {
        bucket_of_[n] = kDropped;
        ++dropped_;
      } else {
        bucket_of_[n] = static_cast<std::int32_t>(rel);
      }
    }
  }

  /// Buckets spanning the dataset's own first to last date.
  static TimeIndex spanning(const Dataset& dataset, Granularity g) {
    const auto lo = bucket_key(dataset.first_date(), g);
    const auto hi = bucket_key(dataset.last_date(), g);
    return TimeIndex(dataset, g, lo, static_cast<std::size_t>(hi - lo + 1));
  }

  Granularity granularity() const noexcept { return granularity_; }
  std::int64_t first_key() const noexcept { return first_key_; }
  std::size_t bucket_count() const noexcept { return bucket_count_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::int32_t>& buckets() const noexcept { return bucket_of_; }
  std::int32_t bucket_of(std::size_t n) const { return bucket_of_.at(n); }
  std::size_t instance_count() const noexcept { return bucket_of_.size(); }
  std::size_t dropped() const noexcept { return dropped_; }
  std::size_t retained() const noexcept { return bucket_of_.size() - dropped_; }

 private:
  Granularity granularity_;
  std::int64_t first_key_;
  std::size_t bucket_count_;
  std::vector<std::string> labels_;
  std::vector<std::int32_t> bucket_of_;
  std::size_t dropped_ = 0;
};

inline std::pair<TimeIndex, TargetSeries> build_time_index(const Dataset& dataset,
                                                           TargetSeries targets) {
  TimeIndex index(dataset, targets.granularity, targets.first_key, targets.size());
  return {std::move(index), std::move(targets)};
}

inline std::pair<TimeIndex, TargetSeries> build_time_index(
    const Dataset& dataset, const std::filesystem::path& targets_file, Granularity g) {
  return build_time_index(dataset, load_targets(targets_file, g));
}

}  // namespace syndro
