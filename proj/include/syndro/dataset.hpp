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
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "syndro/calendar.hpp"
#include "syndro/detail/csv.hpp"
#include "syndro/error.hpp"

namespace syndro {

enum class AttributeKind { discrete, numeric };

inline std::string to_string(AttributeKind k) {
  return k == AttributeKind::discrete ? "discrete" : "numeric";
}

struct AttributeSchema {
  std::string name;
  AttributeKind kind = AttributeKind::discrete;
  std::optional<std::string> category;
  bool blacklisted = false;

  friend bool operator==(const AttributeSchema&, const AttributeSchema&) = default;
};

/// Ordered attribute declarations. Names are unique; categories are numbered
/// from 1 in order of first appearance.
class Schema {
 public:
  Schema() = default;

  explicit Schema(std::vector<AttributeSchema> attributes) : attributes_(std::move(attributes)) {
    for (std::size_t k = 0; k < attributes_.size(); ++k) {
      const auto& a = attributes_[k];
      if (a.name.empty()) throw DataError("attribute name must not be empty");
      if (a.name == "date") throw DataError("attribute name 'date' is reserved");
      if (!by_name_.emplace(a.name, k).second)
        throw DataError("duplicate attribute name '" + a.name + "'");
      if (a.category &&
          std::find(categories_.begin(), categories_.end(), *a.category) == categories_.end())
        categories_.push_back(*a.category);
    }
  }

  static Schema from_json(const nlohmann::json& doc) {
    if (!doc.is_array()) throw DataError("schema must be a JSON array of attributes");
    std::vector<AttributeSchema> attrs;
    for (const auto& item : doc) {
      if (!item.is_object() || !item.contains("name") || !item["name"].is_string())
        throw DataError("schema entry without a string 'name'");
      AttributeSchema a;
      a.name = item["name"].get<std::string>();
      const std::string kind = item.value("kind", std::string{});
      if (kind == "discrete")
        a.kind = AttributeKind::discrete;
      else if (kind == "numeric")
        a.kind = AttributeKind::numeric;
      else
        throw DataError("attribute '" + a.name + "': kind must be 'discrete' or 'numeric'");
      if (item.contains("category") && !item["category"].is_null()) {
        const auto& c = item["category"];
        a.category = c.is_string() ? c.get<std::string>() : c.dump();
      }
      a.blacklisted = item.value("blacklisted", false);
      attrs.push_back(std::move(a));
    }
    return Schema(std::move(attrs));
  }

  nlohmann::json to_json() const {
    auto out = nlohmann::json::array();
    for (const auto& a : attributes_) {
      nlohmann::json item{{"name", a.name}, {"kind", to_string(a.kind)}};
      if (a.category) item["category"] = *a.category;
      if (a.blacklisted) item["blacklisted"] = true;
      out.push_back(std::move(item));
    }
    return out;
  }

  std::size_t size() const noexcept { return attributes_.size(); }
  const AttributeSchema& operator[](std::size_t k) const { return attributes_.at(k); }
  const std::vector<AttributeSchema>& attributes() const noexcept { return attributes_; }

  std::optional<std::size_t> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::string>& categories() const noexcept { return categories_; }

  std::optional<std::size_t> category_number(std::size_t k) const {
    const auto& c = attributes_.at(k).category;
    if (!c) return std::nullopt;
    auto it = std::find(categories_.begin(), categories_.end(), *c);
    return static_cast<std::size_t>(it - categories_.begin()) + 1;
  }

  friend bool operator==(const Schema& a, const Schema& b) { return a.attributes_ == b.attributes_; }

 private:
  std::vector<AttributeSchema> attributes_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::vector<std::string> categories_;
};

inline Schema load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("schema file '" + path.string() + "': " + e.what());
  }
  return Schema::from_json(doc);
}

/// One attribute's values. Discrete columns store codes into a sorted token
/// dictionary (-1 = missing); numeric columns store doubles (NaN = missing).
class Column {
 public:
  static constexpr std::int32_t kMissing = -1;

  static Column discrete(std::vector<std::string> dictionary, std::vector<std::int32_t> codes) {
    if (!std::is_sorted(dictionary.begin(), dictionary.end()) ||
        std::adjacent_find(dictionary.begin(), dictionary.end()) != dictionary.end())
      throw DataError("token dictionary must be sorted and duplicate-free");
    const auto limit = static_cast<std::int32_t>(dictionary.size());
    for (auto c : codes)
      if (c < kMissing || c >= limit) throw DataError("token code out of range");
    Column col;
    col.kind_ = AttributeKind::discrete;
    col.dictionary_ = std::move(dictionary);
    col.codes_ = std::move(codes);
    return col;
  }

  static Column numeric(std::vector<double> values) {
    for (double v : values)
      if (std::isinf(v)) throw DataError("numeric cells must be finite");
    Column col;
    col.kind_ = AttributeKind::numeric;
    col.values_ = std::move(values);
    return col;
  }

  AttributeKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept {
    return kind_ == AttributeKind::discrete ? codes_.size() : values_.size();
  }

  bool is_missing(std::size_t n) const {
    return kind_ == AttributeKind::discrete ? codes_[n] == kMissing : std::isnan(values_[n]);
  }

  std::optional<std::string_view> token(std::size_t n) const {
    if (kind_ != AttributeKind::discrete || codes_[n] == kMissing) return std::nullopt;
    return std::string_view(dictionary_[static_cast<std::size_t>(codes_[n])]);
  }

  std::optional<double> value(std::size_t n) const {
    if (kind_ != AttributeKind::numeric || std::isnan(values_[n])) return std::nullopt;
    return values_[n];
  }

  /// Code of `token` in the dictionary, if the token was observed.
  std::optional<std::int32_t> find_code(std::string_view token) const {
    auto it = std::lower_bound(dictionary_.begin(), dictionary_.end(), token,
                               [](const std::string& a, std::string_view b) { return a < b; });
    if (it == dictionary_.end() || *it != token) return std::nullopt;
    return static_cast<std::int32_t>(it - dictionary_.begin());
  }

  const std::vector<std::string>& dictionary() const noexcept { return dictionary_; }
  const std::vector<std::int32_t>& codes() const noexcept { return codes_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  AttributeKind kind_ = AttributeKind::discrete;
  std::vector<std::string> dictionary_;
  std::vector<std::int32_t> codes_;
  std::vector<double> values_;
};

/// Immutable columnar instance store with one calendar date per instance.
class Dataset {
 public:
  Dataset(Schema schema, std::vector<Column> columns, std::vector<Date> dates)
      : schema_(std::move(schema)), columns_(std::move(columns)), dates_(std::move(dates)) {
    if (dates_.empty()) throw DataError("dataset must contain at least one instance");
    if (columns_.size() != schema_.size())
      throw DataError("column count does not match schema");
    for (std::size_t k = 0; k < columns_.size(); ++k) {
      if (columns_[k].kind() != schema_[k].kind)
        throw DataError("column '" + schema_[k].name + "' does not match its declared kind");
      if (columns_[k].size() != dates_.size())
        throw DataError("column '" + schema_[k].name + "' has the wrong length");
    }
    auto [lo, hi] = std::minmax_element(dates_.begin(), dates_.end());
    first_ = *lo;
    last_ = *hi;
  }

  std::size_t size() const noexcept { return dates_.size(); }
  std::size_t attribute_count() const noexcept { return columns_.size(); }
  const Schema& schema() const noexcept { return schema_; }
  const Column& column(std::size_t k) const { return columns_.at(k); }
  const std::vector<Date>& dates() const noexcept { return dates_; }
  Date date(std::size_t n) const { return dates_.at(n); }
  Date first_date() const noexcept { return first_; }
  Date last_date() const noexcept { return last_; }

 private:
  Schema schema_;
  std::vector<Column> columns_;
  std::vector<Date> dates_;
  Date first_{};
  Date last_{};
};

/// Reads delimited instance data (comma or tab, detected from the header).
/// Row numbers in diagnostics count data rows from 1.
inline Dataset read_dataset(std::istream& in, Schema schema) {
  detail::DelimitedReader reader(in);
  std::vector<std::string> header;
  if (!reader.next(header)) throw DataError("instance file is empty");

  const std::size_t K = schema.size();
  std::optional<std::size_t> date_field;
  std::vector<std::optional<std::size_t>> attr_of_field(header.size());
  std::vector<bool> seen(K, false);
  for (std::size_t f = 0; f < header.size(); ++f) {
    const auto name = std::string(detail::trim(header[f]));
    if (name == "date") {
      if (date_field) throw DataError("duplicate column 'date'");
      date_field = f;
      continue;
    }
    auto k = schema.find(name);
    if (!k) throw DataError("unknown column '" + name + "'");
    if (seen[*k]) throw DataError("duplicate column '" + name + "'");
    seen[*k] = true;
    attr_of_field[f] = *k;
  }
  if (!date_field) throw DataError("missing column 'date'");
  for (std::size_t k = 0; k < K; ++k)
    if (!seen[k]) throw DataError("missing column '" + schema[k].name + "'");

  std::vector<std::vector<std::int32_t>> codes(K);
  std::vector<std::unordered_map<std::string, std::int32_t>> provisional(K);
  std::vector<std::vector<std::string>> first_seen(K);
  std::vector<std::vector<double>> values(K);
  std::vector<Date> dates;

  std::vector<std::string> fields;
  std::size_t row = 0;
  while (reader.next(fields)) {
    ++row;
    const std::string where = " at row " + std::to_string(row);
    if (fields.size() != header.size())
      throw DataError("expected " + std::to_string(header.size()) + " fields but found " +
                      std::to_string(fields.size()) + where);
    const auto date_text = detail::trim(fields[*date_field]);
    if (date_text.empty()) throw DataError("missing date" + where);
    auto date = try_parse_date(date_text);
    if (!date) throw DataError("unparsable date '" + std::string(date_text) + "'" + where);
    dates.push_back(*date);

    for (std::size_t f = 0; f < fields.size(); ++f) {
      if (!attr_of_field[f]) continue;
      const std::size_t k = *attr_of_field[f];
      const auto cell = detail::trim(fields[f]);
      if (schema[k].kind == AttributeKind::discrete) {
        if (cell.empty()) {
          codes[k].push_back(Column::kMissing);
          continue;
        }
        auto [it, inserted] = provisional[k].try_emplace(
            std::string(cell), static_cast<std::int32_t>(first_seen[k].size()));
        if (inserted) first_seen[k].emplace_back(cell);
        codes[k].push_back(it->second);
      } else {
        if (cell.empty()) {
          values[k].push_back(std::nan(""));
          continue;
        }
        double v = 0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
          throw DataError("kind mismatch" + where + ": column '" + schema[k].name +
                          "' is numeric but holds '" + std::string(cell) + "'");
        values[k].push_back(v);
      }
    }
  }
  if (dates.empty()) throw DataError("instance file has no data rows");

  std::vector<Column> columns;
  columns.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    if (schema[k].kind == AttributeKind::numeric) {
      columns.push_back(Column::numeric(std::move(values[k])));
      continue;
    }
    // Re-code so that codes follow the sorted dictionary.
    std::vector<std::string> dictionary = first_seen[k];
    std::sort(dictionary.begin(), dictionary.end());
    std::vector<std::int32_t> remap(first_seen[k].size());
    for (std::size_t i = 0; i < first_seen[k].size(); ++i)
      remap[i] = static_cast<std::int32_t>(
          std::lower_bound(dictionary.begin(), dictionary.end(), first_seen[k][i]) -
          dictionary.begin());
    for (auto& c : codes[k])
      if (c != Column::kMissing) c = remap[static_cast<std::size_t>(c)];
    columns.push_back(Column::discrete(std::move(dictionary), std::move(codes[k])));
  }
  return Dataset(std::move(schema), std::move(columns), std::move(dates));
}

inline Dataset load_dataset(const std::filesystem::path& instances_file,
                            const std::filesystem::path& schema_file) {
  Schema schema = load_schema(schema_file);
  std::ifstream in(instances_file);
  if (!in) throw DataError("cannot open instance file '" + instances_file.string() + "'");
  return read_dataset(in, std::move(schema));
}

}  // namespace syndro
