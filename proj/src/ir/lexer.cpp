// SPDX-License-Identifier: Apache-2.0

#include "lexer.h"

#include <cctype>

namespace smr::detail {

std::string_view describe(Tok t) {
  switch (t) {
    case Tok::Eof: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::ValueName: return "value name";
    case Tok::Symbol: return "symbol";
    case Tok::String: return "string";
    case Tok::Integer: return "integer";
    case Tok::Float: return "float";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LAngle: return "'<'";
    case Tok::RAngle: return "'>'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Equal: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::Caret: return "'^'";
  }
  return "token";
}

namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}
bool name_char(char c) { return ident_char(c) || c == '.'; }

}  // namespace

void Lexer::bump() {
  if (ch() == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  ++pos_;
}

void Lexer::skip_trivia() {
  for (;;) {
    char c = ch();
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump();
    } else if (c == '#' || (c == '/' && ch(1) == '/')) {
      while (ch() != '\n' && ch() != '\0') bump();
    } else {
      return;
    }
  }
}

void Lexer::advance() {
  skip_trivia();
  current_ = Token{};
  current_.line = line_;
  current_.column = column_;
  current_.offset = pos_;
  char c = ch();
  if (c == '\0') {
    current_.kind = Tok::Eof;
    return;
  }

  auto single = [&](Tok k) {
    current_.kind = k;
    current_.text = std::string(1, c);
    bump();
  };

  switch (c) {
    case '(': return single(Tok::LParen);
    case ')': return single(Tok::RParen);
    case '{': return single(Tok::LBrace);
    case '}': return single(Tok::RBrace);
    case '<': return single(Tok::LAngle);
    case '>': return single(Tok::RAngle);
    case ',': return single(Tok::Comma);
    case ':': return single(Tok::Colon);
    case '=': return single(Tok::Equal);
    case '^': return single(Tok::Caret);
    default: break;
  }

  if (c == '-' && ch(1) == '>') {
    current_.kind = Tok::Arrow;
    current_.text = "->";
    bump();
    bump();
    return;
  }

  if (c == '%' || c == '@') {
    current_.kind = c == '%' ? Tok::ValueName : Tok::Symbol;
    bump();
    while (name_char(ch())) {
      current_.text += ch();
      bump();
    }
    if (current_.text.empty()) fail("expected a name after '" +
                                    std::string(1, c) + "'");
    return;
  }

  if (c == '"') {
    current_.kind = Tok::String;
    bump();
    while (ch() != '"') {
      if (ch() == '\0' || ch() == '\n') fail("unterminated string");
      if (ch() == '\\') {
        bump();
        char e = ch();
        current_.text += e == 'n' ? '\n' : e;
        bump();
        continue;
      }
      current_.text += ch();
      bump();
    }
    bump();
    return;
  }

  if (std::isdigit(static_cast<unsigned char>(c)) ||
      ((c == '-' || c == '+') &&
       std::isdigit(static_cast<unsigned char>(ch(1))))) {
    current_.kind = Tok::Integer;
    current_.text += c;
    bump();
    auto digits = [&] {
      while (std::isdigit(static_cast<unsigned char>(ch()))) {
        current_.text += ch();
        bump();
      }
    };
    digits();
    if (ch() == '.' && std::isdigit(static_cast<unsigned char>(ch(1)))) {
      current_.kind = Tok::Float;
      current_.text += ch();
      bump();
      digits();
    }
    if ((ch() == 'e' || ch() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(ch(1))) ||
         ((ch(1) == '-' || ch(1) == '+') &&
          std::isdigit(static_cast<unsigned char>(ch(2)))))) {
      current_.kind = Tok::Float;
      current_.text += ch();
      bump();
      current_.text += ch();
      bump();
      digits();
    }
    return;
  }

  if (ident_start(c)) {
    current_.kind = Tok::Ident;
    while (ident_char(ch())) {
      current_.text += ch();
      bump();
    }
    return;
  }

  fail(std::string("unexpected character '") + c + "'");
}

Token Lexer::expect(Tok k, std::string_view what) {
  if (!at(k)) {
    std::string got = current_.kind == Tok::Eof
                          ? std::string("end of input")
                          : "'" + current_.text + "'";
    fail("expected " + std::string(what) + ", got " + got);
  }
  return next();
}

void Lexer::fail(const std::string& message) const {
  throw Error(ErrorKind::Syntax, message, current_.line, current_.column);
}

void Lexer::fail_at(const Token& t, ErrorKind kind,
                    const std::string& message) const {
  throw Error(kind, message, t.line, t.column);
}

}  // namespace smr::detail
