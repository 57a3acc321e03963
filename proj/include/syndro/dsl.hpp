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

// Text syntax for syndromes:
//
//   syndrome := "FALSE" | conj ("OR" conj)*
//   conj     := cond ("AND" cond)* | "(" conj ")"
//   cond     := name op literal
//   op       := "=" | "<=" | ">"
//
// Names are identifiers or `backtick quoted`. Discrete values are double
// quoted (\" and \\ escape); bare words and numbers are accepted too.
// `#` starts a comment running to the end of the line.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "syndro/dataset.hpp"
#include "syndro/error.hpp"
#include "syndro/syndrome.hpp"

namespace syndro {

namespace detail {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

enum class TokenKind { name, quoted_name, string, number, op, lparen, rparen, kw_or, kw_and, kw_false, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;  // decoded content (names/strings) or raw lexeme
  Op op = Op::eq;
  Position pos;
};

inline bool is_ident_start(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9') || c == '.'; }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_keyword(std::string_view s) { return s == "OR" || s == "AND" || s == "FALSE"; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token tok;
      tok.pos = pos_;
      if (i_ >= text_.size()) {
        tok.kind = TokenKind::end;
        out.push_back(std::move(tok));
        return out;
      }
      const char c = text_[i_];
      if (c == '(' || c == ')') {
        tok.kind = c == '(' ? TokenKind::lparen : TokenKind::rparen;
        tok.text = std::string(1, c);
        advance();
      } else if (c == '=') {
        tok.kind = TokenKind::op;
        tok.op = Op::eq;
        tok.text = "=";
        advance();
      } else if (c == '<' || c == '>') {
        tok.kind = TokenKind::op;
        advance();
        if (c == '<') {
          if (peek() != '=') fail("unknown operator '<' (use '<=' or '>')", tok.pos);
          advance();
          tok.op = Op::le;
          tok.text = "<=";
        } else {
          if (peek() == '=') fail("unknown operator '>=' (use '<=' or '>')", tok.pos);
          tok.op = Op::gt;
          tok.text = ">";
        }
      } else if (c == '"') {
        tok.kind = TokenKind::string;
        tok.text = quoted('"', tok.pos);
      } else if (c == '`') {
        tok.kind = TokenKind::quoted_name;
        tok.text = quoted('`', tok.pos);
        if (tok.text.empty()) fail("empty attribute name", tok.pos);
      } else if (is_digit(c) || ((c == '-' || c == '+' || c == '.') && i_ + 1 < text_.size() &&
                                 (is_digit(text_[i_ + 1]) || text_[i_ + 1] == '.'))) {
        tok.kind = TokenKind::number;
        tok.text = number();
      } else if (is_ident_start(c)) {
        std::size_t j = i_;
        while (j < text_.size() && is_ident_char(text_[j])) ++j;
        tok.text = std::string(text_.substr(i_, j - i_));
        while (i_ < j) advance();
        if (tok.text == "OR")
          tok.kind = TokenKind::kw_or;
        else if (tok.text == "AND")
          tok.kind = TokenKind::kw_and;
        else if (tok.text == "FALSE")
          tok.kind = TokenKind::kw_false;
        else
          tok.kind = TokenKind::name;
      } else {
        fail("unexpected character '" + std::string(1, c) + "'", tok.pos);
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  [[noreturn]] static void fail(const std::string& msg, Position p) {
    throw SyntaxError(msg, p.line, p.column);
  }

  char peek() const { return i_ < text_.size() ? text_[i_] : '\0'; }

  void advance() {
    if (text_[i_] == '\n') {
      ++pos_.line;
      pos_.column = 1;
    } else {
      ++pos_.column;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < text_.size()) {
      const char c = text_[i_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string quoted(char quote, Position start) {
    advance();  // opening quote
    std::string out;
    for (;;) {
      if (i_ >= text_.size()) fail("unterminated quoted text", start);
      const char c = text_[i_];
      if (c == quote) {
        advance();
        return out;
      }
      if (c == '\\') {
        const Position esc = pos_;
        advance();
        if (i_ >= text_.size()) fail("unterminated quoted text", start);
        const char e = text_[i_];
        switch (e) {
          case '"':
          case '`':
          case '\\':
            out.push_back(e);
            break;
          case 'n':
            out.push_back('\n');
            break;
          case 't':
            out.push_back('\t');
            break;
          default:
            fail("unknown escape '\\" + std::string(1, e) + "'", esc);
        }
        advance();
        continue;
      }
      out.push_back(c);
      advance();
    }
  }

  std::string number() {
    std::size_t j = i_;
    if (text_[j] == '-' || text_[j] == '+') ++j;
    while (j < text_.size() && (is_digit(text_[j]) || text_[j] == '.')) ++j;
    if (j < text_.size() && (text_[j] == 'e' || text_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < text_.size() && (text_[k] == '-' || text_[k] == '+')) ++k;
      if (k < text_.size() && is_digit(text_[k])) {
        j = k;
        while (j < text_.size() && is_digit(text_[j])) ++j;
      }
    }
    std::string out(text_.substr(i_, j - i_));
    while (i_ < j) advance();
    return out;
  }

  std::string_view text_;
  std::size_t i_ = 0;
  Position pos_;
};

struct RawCondition {
  std::string name;
  Position name_pos;
  Op op = Op::eq;
  Position op_pos;
  Token literal;
};

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::end:
      return "end of input";
    case TokenKind::string:
      return "string \"" + t.text + "\"";
    case TokenKind::quoted_name:
      return "name `" + t.text + "`";
    default:
      return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

  std::vector<std::vector<RawCondition>> syndrome() {
    std::vector<std::vector<RawCondition>> out;
    if (peek().kind == TokenKind::kw_false) {
      take();
      expect_end("end of input after FALSE");
      return out;
    }
    out.push_back(conjunction());
    while (peek().kind == TokenKind::kw_or) {
      take();
      out.push_back(conjunction());
    }
    expect_end("OR or end of input");
    return out;
  }

  RawCondition single_condition() {
    RawCondition c = condition();
    expect_end("end of input");
    return c;
  }

 private:
  const Token& peek() const { return tokens_[i_]; }
  const Token& take() { return tokens_[i_++]; }

  [[noreturn]] void unexpected(const std::string& what) const {
    const Token& t = peek();
    if (t.kind == TokenKind::end && i_ > 0) {
      const Token& last = tokens_[i_ - 1];
      throw SyntaxError("expected " + what + " after " + describe(last), last.pos.line,
                        last.pos.column);
    }
    throw SyntaxError("expected " + what + ", found " + describe(t), t.pos.line, t.pos.column);
  }

  void expect_end(const std::string& what) {
    if (peek().kind != TokenKind::end) unexpected(what);
  }

  std::vector<RawCondition> conjunction() {
    if (peek().kind == TokenKind::lparen) {
      take();
      auto inner = conjunction();
      if (peek().kind != TokenKind::rparen) unexpected("AND or ')'");
      take();
      return inner;
    }
    std::vector<RawCondition> out;
    out.push_back(condition());
    while (peek().kind == TokenKind::kw_and) {
      take();
      out.push_back(condition());
    }
    return out;
  }

  RawCondition condition() {
    RawCondition c;
    const Token& name = peek();
    if (name.kind != TokenKind::name && name.kind != TokenKind::quoted_name)
      unexpected("an attribute name");
    c.name = name.text;
    c.name_pos = name.pos;
    take();
    if (peek().kind != TokenKind::op) unexpected("an operator ('=', '<=' or '>')");
    c.op = peek().op;
    c.op_pos = peek().pos;
    take();
    const Token& lit = peek();
    if (lit.kind != TokenKind::string && lit.kind != TokenKind::number && lit.kind != TokenKind::name)
      unexpected("a value");
    c.literal = lit;
    take();
    return c;
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
};

inline Condition resolve(const RawCondition& raw, const Schema& schema) {
  const auto k = schema.find(raw.name);
  if (!k)
    throw SyntaxError("unknown attribute '" + raw.name + "'", raw.name_pos.line, raw.name_pos.column);
  const auto& attr = schema[*k];
  const Position lp = raw.literal.pos;
  if (attr.kind == AttributeKind::discrete) {
    if (raw.op != Op::eq)
      throw SyntaxError("operator '" + std::string(to_string(raw.op)) +
                            "' does not apply to discrete attribute '" + attr.name + "'",
                        raw.op_pos.line, raw.op_pos.column);
    return Condition::eq(*k, raw.literal.text);
  }
  if (raw.op == Op::eq)
    throw SyntaxError("operator '=' does not apply to numeric attribute '" + attr.name + "'",
                      raw.op_pos.line, raw.op_pos.column);
  if (raw.literal.kind != TokenKind::number)
    throw SyntaxError("numeric attribute '" + attr.name + "' needs a numeric threshold", lp.line,
                      lp.column);
  std::string_view text = raw.literal.text;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw SyntaxError("malformed number '" + raw.literal.text + "'", lp.line, lp.column);
  return raw.op == Op::le ? Condition::le(*k, v) : Condition::gt(*k, v);
}

inline bool needs_name_quotes(std::string_view name) {
  if (name.empty() || !is_ident_start(name.front()) || is_keyword(name)) return true;
  for (char c : name)
    if (!is_ident_char(c)) return true;
  return false;
}

inline void append_escaped(std::string& out, std::string_view s, char quote) {
  out.push_back(quote);
  for (char c : s) {
    if (c == quote || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      out.push_back(c);
    }
  }
  out.push_back(quote);
}

}  // namespace detail

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline Syndrome parse_syndrome(std::string_view text, const Schema& schema) {
  detail::Parser parser(text);
  auto raw = parser.syndrome();
  std::vector<Conjunction> conjunctions;
  for (const auto& rc : raw) {
    Conjunction conj;
    for (const auto& r : rc) {
      Condition c = detail::resolve(r, schema);
      try {
        conj.append(std::move(c));
      } catch (const ModelError& e) {
        throw SyntaxError(e.what(), r.name_pos.line, r.name_pos.column);
      }
    }
    conjunctions.push_back(std::move(conj));
  }
  return Syndrome(std::move(conjunctions));
}

inline Condition parse_condition(std::string_view text, const Schema& schema) {
  detail::Parser parser(text);
  return detail::resolve(parser.single_condition(), schema);
}

inline std::string format_condition(const Condition& c, const Schema& schema) {
  std::string out;
  const std::string& name = schema[c.attribute].name;
  if (detail::needs_name_quotes(name))
    detail::append_escaped(out, name, '`');
  else
    out += name;
  out.push_back(' ');
  out += to_string(c.op);
  out.push_back(' ');
  if (c.op == Op::eq)
    detail::append_escaped(out, c.token, '"');
  else
    out += format_number(c.threshold);
  return out;
}

inline std::string format_conjunction(const Conjunction& conj, const Schema& schema) {
  std::string out;
  for (std::size_t i = 0; i < conj.size(); ++i) {
    if (i) out += " AND ";
    out += format_condition(conj[i], schema);
  }
  return out;
}

/// Canonical text: one conjunction per line, continuation lines start with OR.
inline std::string format_syndrome(const Syndrome& syndrome, const Schema& schema) {
  if (syndrome.empty()) return "FALSE";
  std::string out;
  for (std::size_t i = 0; i < syndrome.size(); ++i) {
    if (i) out += "\nOR ";
    out += format_conjunction(syndrome[i], schema);
  }
  return out;
}

}  // namespace syndro
