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
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "syndro/error.hpp"

namespace syndro {

using Date = std::chrono::sys_days;

enum class Granularity { daily, weekly, monthly };

inline std::string to_string(Granularity g) {
  switch (g) {
    case Granularity::daily:
      return "daily";
    case Granularity::weekly:
      return "weekly";
    case Granularity::monthly:
      return "monthly";
  }
  return "daily";
}

inline Granularity parse_granularity(std::string_view text) {
  if (text == "daily") return Granularity::daily;
  if (text == "weekly") return Granularity::weekly;
  if (text == "monthly") return Granularity::monthly;
  throw ConfigError("unknown granularity '" + std::string(text) +
                    "' (expected daily, weekly or monthly)");
}

namespace detail {

inline bool parse_digits(std::string_view text, int& out) {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace detail

/// Parses a strict ISO `YYYY-MM-DD` calendar date.
inline std::optional<Date> try_parse_date(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!detail::parse_digits(text.substr(0, 4), y) ||
      !detail::parse_digits(text.substr(5, 2), m) ||
      !detail::parse_digits(text.substr(8, 2), d))
    return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(m)},
                     day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd};
}

inline Date parse_date(std::string_view text) {
  auto d = try_parse_date(text);
  if (!d) throw DataError("unparsable date '" + std::string(text) + "'");
  return *d;
}

inline std::string format_date(Date date) {
  using namespace std::chrono;
  year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()));
  return buf;
}

struct IsoWeek {
  int year;
  unsigned week;
  friend bool operator==(const IsoWeek&, const IsoWeek&) = default;
};

/// ISO-8601 week of a date: the week belongs to the year of its Thursday.
inline IsoWeek iso_week(Date date) {
  using namespace std::chrono;
  const unsigned iso_day = weekday{date}.iso_encoding();  // Mon=1 .. Sun=7
  const Date thursday = date + days{4 - static_cast<int>(iso_day)};
  const year y = year_month_day{thursday}.year();
  const Date jan1 = sys_days{y / January / 1};
  const auto ordinal = (thursday - jan1).count();  // 0-based day of year
  return {static_cast<int>(y), static_cast<unsigned>(ordinal / 7 + 1)};
}

/// Monday starting ISO week 1 of `iso_year` (the week holding January 4th).
inline Date iso_week_one_monday(int iso_year) {
  using namespace std::chrono;
  const Date jan4 = sys_days{year{iso_year} / January / 4};
  const unsigned iso_day = weekday{jan4}.iso_encoding();
  return jan4 - days{static_cast<int>(iso_day) - 1};
}

/// Integer ordinal of the bucket containing `date`. Consecutive buckets of the
/// same granularity have consecutive keys.
inline std::int64_t bucket_key(Date date, Granularity g) {
  using namespace std::chrono;
  const std::int64_t day_number = date.time_since_epoch().count();
  switch (g) {
    case Granularity::daily:
      return day_number;
    case Granularity::weekly:
      // 1970-01-01 is a Thursday; shifting by 3 aligns weeks on Mondays.
      return detail::floor_div(day_number + 3, 7);
    case Granularity::monthly: {
      year_month_day ymd{date};
      return static_cast<std::int64_t>(static_cast<int>(ymd.year())) * 12 +
             (static_cast<unsigned>(ymd.month()) - 1);
    }
  }
  return day_number;
}

/// First calendar day of the bucket with the given key.
inline Date bucket_start(std::int64_t key, Granularity g) {
  using namespace std::chrono;
  switch (g) {
    case Granularity::daily:
      return Date{days{key}};
    case Granularity::weekly:
      return Date{days{key * 7 - 3}};
    case Granularity::monthly: {
      const auto y = static_cast<int>(detail::floor_div(key, 12));
      const auto m = static_cast<unsigned>(key - static_cast<std::int64_t>(y) * 12 + 1);
      return sys_days{year{y} / month{m} / 1};
    }
  }
  return Date{days{key}};
}

inline std::string bucket_label(std::int64_t key, Granularity g) {
  using namespace std::chrono;
  char buf[16];
  switch (g) {
    case Granularity::daily:
      return format_date(bucket_start(key, g));
    case Granularity::weekly: {
      const IsoWeek w = iso_week(bucket_start(key, g));
      std::snprintf(buf, sizeof buf, "%04d-W%02u", w.year, w.week);
      return buf;
    }
    case Granularity::monthly: {
      year_month_day ymd{bucket_start(key, g)};
      std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()),
                    static_cast<unsigned>(ymd.month()));
      return buf;
    }
  }
  return {};
}

/// Granularity implied by the textual shape of a bucket label, if any.
inline std::optional<Granularity> label_granularity(std::string_view label) {
  if (label.size() == 10 && label[4] == '-' && label[7] == '-') return Granularity::daily;
  if (label.size() == 8 && label[4] == '-' && label[5] == 'W') return Granularity::weekly;
  if (label.size() == 7 && label[4] == '-') return Granularity::monthly;
  return std::nullopt;
}

/// Parses a bucket label of the requested granularity into its key.
inline std::int64_t parse_bucket_label(std::string_view label, Granularity g) {
  using namespace std::chrono;
  const auto shape = label_granularity(label);
  if (!shape || *shape != g)
    throw DataError("bucket label '" + std::string(label) + "' does not match granularity " +
                    to_string(g));
  const std::string bad = "malformed bucket label '" + std::string(label) + "'";
  switch (g) {
    case Granularity::daily: {
      auto d = try_parse_date(label);
      if (!d) throw DataError(bad);
      return bucket_key(*d, g);
    }
    case Granularity::weekly: {
      int y = 0, w = 0;
      if (!detail::parse_digits(label.substr(0, 4), y) ||
          !detail::parse_digits(label.substr(6, 2), w) || w < 1)
        throw DataError(bad);
      const Date monday = iso_week_one_monday(y) + days{7 * (w - 1)};
      if (iso_week(monday).year != y) throw DataError(bad);
      return bucket_key(monday, g);
    }
    case Granularity::monthly: {
      int y = 0, m = 0;
      if (!detail::parse_digits(label.substr(0, 4), y) ||
          !detail::parse_digits(label.substr(5, 2), m) || m < 1 || m > 12)
        throw DataError(bad);
      return static_cast<std::int64_t>(y) * 12 + (m - 1);
    }
  }
  throw DataError(bad);
}

}  // namespace syndro
