// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexer.h"
#include "smr/ir.h"

namespace smr::detail {

/// Recursive-descent reader for functions in the generic IR syntax.
/// ValueIds are drawn from a counter owned by the caller so that several
/// functions (e.g. both halves of a PAT pair) share one id space.
class Parser {
 public:
  Parser(Lexer& lex, ValueId& next_id) : lex_(lex), next_id_(next_id) {}

  FuncDef parse_function();
  Type parse_type();

 private:
  struct Binding {
    ValueId id;
    Type type;
  };

  Operation parse_operation();
  Region parse_region();
  std::vector<BlockArg> parse_block_header();
  AttrValue parse_attr_value();
  std::vector<Type> parse_type_list(Tok close);
  std::string parse_type_text();

  void define(const Token& name, ValueId id, const Type& type);
  const Binding& lookup(const Token& name) const;

  Lexer& lex_;
  ValueId& next_id_;
  std::vector<std::unordered_map<std::string, Binding>> scopes_;
  std::unordered_set<std::string> function_names_;
};

}  // namespace smr::detail
