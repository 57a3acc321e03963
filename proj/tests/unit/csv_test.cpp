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

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "syndro/detail/csv.hpp"

namespace syndro::detail {
namespace {

std::vector<std::vector<std::string>> read_all(const std::string& text) {
  std::istringstream in(text);
  DelimitedReader reader(in);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> fields;
  while (reader.next(fields)) rows.push_back(fields);
  return rows;
}

using Rows = std::vector<std::vector<std::string>>;

TEST(Csv, CommaSeparated) {
  EXPECT_EQ(read_all("a,b,c\n1,,3\n"), (Rows{{"a", "b", "c"}, {"1", "", "3"}}));
}

TEST(Csv, TabDetectedFromHeader) {
  EXPECT_EQ(read_all("a\tb\n1,2\t3\n"), (Rows{{"a", "b"}, {"1,2", "3"}}));
}

TEST(Csv, QuotedFields) {
  EXPECT_EQ(read_all("a,b\n\"x, y\",\"say \"\"hi\"\"\"\n"), (Rows{{"a", "b"}, {"x, y", "say \"hi\""}}));
}

TEST(Csv, QuotedFieldSpanningLines) {
  EXPECT_EQ(read_all("a,b\n\"line one\nline two\",2\n"), (Rows{{"a", "b"}, {"line one\nline two", "2"}}));
}

TEST(Csv, CrLfAndBlankLines) {
  EXPECT_EQ(read_all("a,b\r\n\r\n1,2\r\n\n"), (Rows{{"a", "b"}, {"1", "2"}}));
}

TEST(Csv, TrailingEmptyField) { EXPECT_EQ(read_all("a,b\n1,\n"), (Rows{{"a", "b"}, {"1", ""}})); }

TEST(Csv, UnterminatedQuoteIsAnError) {
  std::istringstream in("a,b\n\"open,2\n");
  DelimitedReader reader(in);
  std::vector<std::string> fields;
  ASSERT_TRUE(reader.next(fields));
  EXPECT_THROW(reader.next(fields), DataError);
}

TEST(Csv, LineNumbersCountPhysicalLines) {
  std::istringstream in("a\n\nb\n");
  DelimitedReader reader(in);
  std::vector<std::string> fields;
  reader.next(fields);
  EXPECT_EQ(reader.line_number(), 1u);
  reader.next(fields);
  EXPECT_EQ(reader.line_number(), 3u);
}

TEST(Csv, Trim) {
  EXPECT_EQ(trim("  x y \t"), "x y");
  EXPECT_EQ(trim("   "), "");
}

}  // namespace
}  // namespace syndro::detail
