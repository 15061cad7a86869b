// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "smr/error.h"

namespace smr::detail {

enum class Tok {
  Eof,
  Ident,      // bare identifier
  ValueName,  // %name
  Symbol,     // @name
  String,     // "..." (unescaped text)
  Integer,
  Float,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LAngle,
  RAngle,
  Comma,
  Colon,
  Equal,
  Arrow,
  Caret,
};

std::string_view describe(Tok t);

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  unsigned line = 1;
  unsigned column = 1;
  std::size_t offset = 0;
};

/// Splits IR and PAT text into tokens. `//` and `#` start line comments.
class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }
  Token next() {
    Token t = current_;
    advance();
    return t;
  }
  bool at(Tok k) const { return current_.kind == k; }
  bool accept(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }
  Token expect(Tok k, std::string_view what);
  [[noreturn]] void fail(const std::string& message) const;
  [[noreturn]] void fail_at(const Token& t, ErrorKind kind,
                            const std::string& message) const;

  std::size_t offset() const { return current_.offset; }

 private:
  void advance();
  void skip_trivia();
  char ch(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  void bump();

  std::string_view text_;
  std::size_t pos_ = 0;
  unsigned line_ = 1;
  unsigned column_ = 1;
  Token current_;
};

}  // namespace smr::detail
