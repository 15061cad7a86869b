// SPDX-License-Identifier: Apache-2.0

#include "parser.h"

#include <charconv>
#include <cstdlib>

namespace smr::detail {

void Parser::define(const Token& name, ValueId id, const Type& type) {
  if (!function_names_.insert(name.text).second)
    lex_.fail_at(name, ErrorKind::DuplicateValue,
                 "duplicate definition of %" + name.text);
  scopes_.back().emplace(name.text, Binding{id, type});
}

const Parser::Binding& Parser::lookup(const Token& name) const {
  for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
    if (auto found = it->find(name.text); found != it->end())
      return found->second;
  lex_.fail_at(name, ErrorKind::UndefinedValue,
               "use of undefined value %" + name.text);
}

std::string Parser::parse_type_text() {
  Token head = lex_.next();
  if (head.kind != Tok::Ident && head.kind != Tok::Integer)
    lex_.fail_at(head, ErrorKind::Syntax,
                 "expected a type, got '" + head.text + "'");
  std::string text = head.text;
  // Dimension-like suffixes (`4xf64`) arrive as Integer followed by Ident.
  while (head.kind == Tok::Integer && lex_.at(Tok::Ident)) text += lex_.next().text;
  if (lex_.accept(Tok::LAngle)) {
    text += '<';
    text += parse_type_text();
    while (lex_.accept(Tok::Comma)) {
      text += ',';
      text += parse_type_text();
    }
    lex_.expect(Tok::RAngle, "'>'");
    text += '>';
  }
  return text;
}

Type Parser::parse_type() { return Type(parse_type_text()); }

std::vector<Type> Parser::parse_type_list(Tok close) {
  std::vector<Type> types;
  if (lex_.accept(close)) return types;
  do {
    types.push_back(parse_type());
  } while (lex_.accept(Tok::Comma));
  lex_.expect(close, describe(close));
  return types;
}

AttrValue Parser::parse_attr_value() {
  const Token& t = lex_.peek();
  switch (t.kind) {
    case Tok::Integer: {
      Token lit = lex_.next();
      IntAttr a;
      auto [p, ec] = std::from_chars(
          lit.text.data() + (lit.text[0] == '+' ? 1 : 0),
          lit.text.data() + lit.text.size(), a.value);
      if (ec != std::errc{})
        lex_.fail_at(lit, ErrorKind::Syntax, "integer out of range");
      if (lex_.accept(Tok::Colon)) a.type = parse_type();
      return a;
    }
    case Tok::Float: {
      Token lit = lex_.next();
      FloatAttr a;
      a.value = std::strtod(lit.text.c_str(), nullptr);
      if (lex_.accept(Tok::Colon)) a.type = parse_type();
      return a;
    }
    case Tok::String:
      return StringAttr{lex_.next().text};
    case Tok::Symbol:
      return SymbolAttr{lex_.next().text};
    case Tok::Ident:
      return TypeAttr{parse_type()};
    default:
      lex_.fail("expected an attribute value");
  }
}

std::vector<BlockArg> Parser::parse_block_header() {
  std::vector<BlockArg> args;
  lex_.expect(Tok::Caret, "'^'");
  lex_.expect(Tok::LParen, "'('");
  if (!lex_.accept(Tok::RParen)) {
    do {
      Token name = lex_.expect(Tok::ValueName, "block argument");
      lex_.expect(Tok::Colon, "':'");
      Type type = parse_type();
      ValueId id = next_id_++;
      define(name, id, type);
      args.push_back({id, type});
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::RParen, "')'");
  }
  lex_.expect(Tok::Colon, "':' after block arguments");
  return args;
}

Region Parser::parse_region() {
  Region region;
  lex_.expect(Tok::LBrace, "'{' to open a region");
  scopes_.emplace_back();
  region.blocks.emplace_back();
  bool first = true;
  while (!lex_.accept(Tok::RBrace)) {
    if (lex_.at(Tok::Caret)) {
      // A header before any op labels the entry block; later headers start
      // additional blocks.
      if (!first || !region.blocks.back().ops.empty() ||
          !region.blocks.back().args.empty())
        region.blocks.emplace_back();
      region.blocks.back().args = parse_block_header();
      first = false;
      continue;
    }
    if (lex_.at(Tok::Eof)) lex_.fail("unterminated region");
    region.blocks.back().ops.push_back(parse_operation());
    first = false;
  }
  scopes_.pop_back();
  return region;
}

Operation Parser::parse_operation() {
  Operation op;
  std::vector<Token> result_names;
  if (lex_.at(Tok::ValueName)) {
    do {
      result_names.push_back(lex_.expect(Tok::ValueName, "result name"));
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::Equal, "'='");
  }

  Token name = lex_.expect(Tok::String, "quoted operation name");
  auto dot = name.text.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == name.text.size())
    lex_.fail_at(name, ErrorKind::Syntax,
                 "operation name '" + name.text +
                     "' must have the form \"dialect.op\"");
  op.name = name.text;

  std::vector<Token> operand_names;
  lex_.expect(Tok::LParen, "'('");
  if (!lex_.accept(Tok::RParen)) {
    do {
      operand_names.push_back(lex_.expect(Tok::ValueName, "operand"));
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::RParen, "')'");
  }
  std::vector<Type> operand_types;
  for (const Token& t : operand_names) {
    const Binding& b = lookup(t);
    op.operands.push_back(b.id);
    operand_types.push_back(b.type);
  }

  if (lex_.accept(Tok::LBrace)) {
    if (!lex_.accept(Tok::RBrace)) {
      do {
        Token key = lex_.expect(Tok::Ident, "attribute name");
        lex_.expect(Tok::Equal, "'='");
        if (!op.attributes.emplace(key.text, parse_attr_value()).second)
          lex_.fail_at(key, ErrorKind::Syntax,
                       "duplicate attribute '" + key.text + "'");
      } while (lex_.accept(Tok::Comma));
      lex_.expect(Tok::RBrace, "'}'");
    }
  }

  if (lex_.accept(Tok::LParen)) {
    do {
      op.regions.push_back(parse_region());
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::RParen, "')' after regions");
  }

  Token colon = lex_.expect(Tok::Colon, "':' before the operation type");
  lex_.expect(Tok::LParen, "'('");
  std::vector<Type> declared_inputs = parse_type_list(Tok::RParen);
  lex_.expect(Tok::Arrow, "'->'");
  std::vector<Type> declared_results;
  if (lex_.accept(Tok::LParen))
    declared_results = parse_type_list(Tok::RParen);
  else
    declared_results.push_back(parse_type());

  if (declared_inputs != operand_types) {
    std::string msg = "operand types of '" + op.name +
                      "' do not match the definitions of its operands";
    lex_.fail_at(colon, ErrorKind::TypeMismatch, msg);
  }
  if (declared_results.size() != result_names.size())
    lex_.fail_at(colon, ErrorKind::TypeMismatch,
                 "'" + op.name + "' declares " +
                     std::to_string(declared_results.size()) +
                     " result type(s) for " +
                     std::to_string(result_names.size()) + " result name(s)");

  for (std::size_t i = 0; i < result_names.size(); ++i) {
    ValueId id = next_id_++;
    op.results.push_back({id, declared_results[i]});
  }
  // Results become visible only after the op, never inside its regions.
  for (std::size_t i = 0; i < result_names.size(); ++i)
    define(result_names[i], op.results[i].id, op.results[i].type);
  return op;
}

FuncDef Parser::parse_function() {
  FuncDef f;
  Token kw = lex_.expect(Tok::Ident, "'func'");
  if (kw.text != "func")
    lex_.fail_at(kw, ErrorKind::Syntax, "expected 'func', got '" + kw.text + "'");
  f.name = lex_.expect(Tok::Symbol, "function name").text;

  function_names_.clear();
  scopes_.clear();
  scopes_.emplace_back();
  lex_.expect(Tok::LParen, "'('");
  if (!lex_.accept(Tok::RParen)) {
    do {
      Token name = lex_.expect(Tok::ValueName, "parameter");
      lex_.expect(Tok::Colon, "':'");
      Param p{next_id_++, name.text, parse_type()};
      define(name, p.id, p.type);
      f.params.push_back(std::move(p));
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::RParen, "')'");
  }
  f.body = parse_region();
  scopes_.clear();
  return f;
}

}  // namespace smr::detail
