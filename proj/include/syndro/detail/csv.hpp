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

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "syndro/error.hpp"

namespace syndro::detail {

// Minimal RFC 4180 style reader: quoted fields may contain the delimiter,
// doubled quotes and line breaks. A trailing '\r' is stripped.
class DelimitedReader {
 public:
  /// A zero delimiter is detected from the first record.
  explicit DelimitedReader(std::istream& in, char delimiter = '\0')
      : in_(in), delimiter_(delimiter) {}

  /// Reads the next record into `fields`; returns false at end of input.
  /// Blank lines are skipped.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_number_;
      strip_cr(line);
      if (line.empty()) continue;
      if (delimiter_ == '\0') delimiter_ = detect(line);
      split(line, fields);
      return true;
    }
    return false;
  }

  std::size_t line_number() const noexcept { return line_number_; }

  /// Tab when the header line contains one, comma otherwise.
  static char detect(std::string_view header) {
    return header.find('\t') != std::string_view::npos ? '\t' : ',';
  }

 private:
  static void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }

  void split(std::string& line, std::vector<std::string>& fields) {
    fields.clear();
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    for (;;) {
      if (i == line.size()) {
        if (!quoted) break;
        std::string more;
        if (!std::getline(in_, more))
          throw DataError("unterminated quoted field at line " + std::to_string(line_number_));
        ++line_number_;
        strip_cr(more);
        field.push_back('\n');
        line = std::move(more);
        i = 0;
        continue;
      }
      const char c = line[i++];
      if (quoted) {
        if (c == '"') {
          if (i < line.size() && line[i] == '"') {
            field.push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"' && field.empty()) {
        quoted = true;
      } else if (c == delimiter_) {
        fields.push_back(std::move(field));
        field.clear();
      } else {
        field.push_back(c);
      }
    }
    fields.push_back(std::move(field));
  }

  std::istream& in_;
  char delimiter_;
  std::size_t line_number_ = 0;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace syndro::detail
