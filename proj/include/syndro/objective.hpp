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
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "syndro/error.hpp"

namespace syndro {

enum class ObjectiveKind { pearson, spearman, kendall };

inline std::string to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::pearson:
      return "pearson";
    case ObjectiveKind::spearman:
      return "spearman";
    case ObjectiveKind::kendall:
      return "kendall";
  }
  return "pearson";
}

inline ObjectiveKind parse_objective(std::string_view text) {
  if (text == "pearson") return ObjectiveKind::pearson;
  if (text == "spearman") return ObjectiveKind::spearman;
  if (text == "kendall") return ObjectiveKind::kendall;
  throw ConfigError("unknown objective '" + std::string(text) +
                    "' (expected pearson, spearman or kendall)");
}

/// Absolute correlation in [0, 1]. A series without variance makes the score
/// degenerate, and degenerate scores are 0.
struct Score {
  double value = 0.0;
  bool degenerate = true;

  static Score of(double v) { return {std::clamp(std::fabs(v), 0.0, 1.0), false}; }
  static Score none() { return {}; }
};

namespace detail {

using wide = __int128;

inline void check_lengths(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("series lengths differ");
  if (a < 2) throw std::invalid_argument("correlation needs at least two buckets");
}

/// |r| from exact integer moments.
inline Score pearson_from_moments(wide T, wide sx, wide sy, wide sxx, wide syy, wide sxy) {
  const wide num = T * sxy - sx * sy;
  const wide dx = T * sxx - sx * sx;
  const wide dy = T * syy - sy * sy;
  if (dx <= 0 || dy <= 0) return Score::none();
  const double r = static_cast<double>(num) /
                   (std::sqrt(static_cast<double>(dx)) * std::sqrt(static_cast<double>(dy)));
  return Score::of(r);
}

/// Doubled average ranks (1-based), which are integers even with ties.
inline std::vector<std::int64_t> doubled_ranks(std::span<const std::int64_t> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<std::int64_t> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    // positions i..j hold rank (i+1 + j+1) / 2
    const auto doubled = static_cast<std::int64_t>(i + j + 2);
    for (std::size_t p = i; p <= j; ++p) ranks[order[p]] = doubled;
    i = j + 1;
  }
  return ranks;
}

inline std::int64_t tie_pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Merge sort on `v` counting inversions (strictly decreasing pairs).
inline std::int64_t count_swaps(std::vector<std::int64_t>& v, std::vector<std::int64_t>& scratch,
                                std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = count_swaps(v, scratch, lo, mid) + count_swaps(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace detail

/// Absolute Pearson correlation accumulated in one pass with exact 128-bit
/// integer moments.
inline Score pearson_abs(std::span<const std::int64_t> y, std::span<const std::int64_t> yhat) {
  detail::check_lengths(y.size(), yhat.size());
  using detail::wide;
  wide sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t t = 0; t < y.size(); ++t) {
    const wide a = y[t], b = yhat[t];
    sx += a;
    sy += b;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  return detail::pearson_from_moments(static_cast<wide>(y.size()), sx, sy, sxx, syy, sxy);
}

/// Absolute Spearman rank correlation (average ranks for ties).
inline Score spearman_abs(std::span<const std::int64_t> y, std::span<const std::int64_t> yhat) {
  detail::check_lengths(y.size(), yhat.size());
  const auto ry = detail::doubled_ranks(y);
  const auto rh = detail::doubled_ranks(yhat);
  return pearson_abs(ry, rh);
}

/// Absolute Kendall tau-b, O(T log T) via Knight's merge-sort algorithm.
inline Score kendall_abs(std::span<const std::int64_t> y, std::span<const std::int64_t> yhat) {
  detail::check_lengths(y.size(), yhat.size());
  const std::size_t T = y.size();
  std::vector<std::size_t> order(T);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return y[a] != y[b] ? y[a] < y[b] : yhat[a] < yhat[b];
  });

  const auto n0 = detail::tie_pairs(static_cast<std::int64_t>(T));
  std::int64_t ties_x = 0, ties_joint = 0;
  for (std::size_t i = 0; i < T;) {
    std::size_t j = i;
    while (j + 1 < T && y[order[j + 1]] == y[order[i]]) ++j;
    ties_x += detail::tie_pairs(static_cast<std::int64_t>(j - i + 1));
    for (std::size_t a = i; a <= j;) {
      std::size_t b = a;
      while (b + 1 <= j && yhat[order[b + 1]] == yhat[order[a]]) ++b;
      ties_joint += detail::tie_pairs(static_cast<std::int64_t>(b - a + 1));
      a = b + 1;
    }
    i = j + 1;
  }

  std::vector<std::int64_t> v(T), scratch(T);
  for (std::size_t i = 0; i < T; ++i) v[i] = yhat[order[i]];
  const std::int64_t swaps = detail::count_swaps(v, scratch, 0, T);

  std::int64_t ties_y = 0;
  for (std::size_t i = 0; i < T;) {
    std::size_t j = i;
    while (j + 1 < T && v[j + 1] == v[i]) ++j;
    ties_y += detail::tie_pairs(static_cast<std::int64_t>(j - i + 1));
    i = j + 1;
  }

  const std::int64_t dx = n0 - ties_x;
  const std::int64_t dy = n0 - ties_y;
  if (dx <= 0 || dy <= 0) return Score::none();
  const std::int64_t num = n0 - ties_x - ties_y + ties_joint - 2 * swaps;
  return Score::of(static_cast<double>(num) /
                   (std::sqrt(static_cast<double>(dx)) * std::sqrt(static_cast<double>(dy))));
}

inline Score score_model(ObjectiveKind kind, std::span<const std::int64_t> y,
                         std::span<const std::int64_t> yhat) {
  switch (kind) {
    case ObjectiveKind::pearson:
      return pearson_abs(y, yhat);
    case ObjectiveKind::spearman:
      return spearman_abs(y, yhat);
    case ObjectiveKind::kendall:
      return kendall_abs(y, yhat);
  }
  return pearson_abs(y, yhat);
}

}  // namespace syndro
