// SPDX-License-Identifier: Apache-2.0

#include "smr/pat.h"

#include <set>

#include "../ir/parser.h"
#include "smr/error.h"

namespace smr {

namespace {

ErrorKind error_for(ViolationKind v) {
  switch (v) {
    case ViolationKind::MultiBlockRegion: return ErrorKind::MultiBlockRegion;
    case ViolationKind::MultiResult: return ErrorKind::MultiResult;
    case ViolationKind::ArityMismatch: return ErrorKind::ArityMismatch;
    case ViolationKind::MissingTerminator: return ErrorKind::MissingTerminator;
  }
  return ErrorKind::Syntax;
}

std::string signature(const FuncDef& f) {
  std::string s = "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    if (i) s += ", ";
    s += f.params[i].type.str();
  }
  return s + ")";
}

void expect_language(detail::Lexer& lex) {
  detail::Token tag = lex.expect(detail::Tok::Ident, "language tag");
  if (tag.text != "ir")
    lex.fail_at(tag, ErrorKind::UnsupportedLanguage,
                "unsupported language tag '" + tag.text +
                    "'; only 'ir' sections are supported");
}

void reject_violations(const FuncDef& f, const DialectConfig& cfg,
                       const detail::Token& at, const char* role) {
  for (const Violation& v : validate_constraints(f, cfg))
    throw Error(error_for(v.kind),
                std::string(role) + " @" + f.name + " at op " + v.op_path +
                    ": " + v.message,
                at.line, at.column);
}

}  // namespace

PeeledWrapper peel_wrapper(const FuncDef& f, const DialectConfig& cfg) {
  PeeledWrapper out;
  out.args = f.params;
  out.body = f.body;
  if (out.body.blocks.empty()) out.body.blocks.emplace_back();
  auto& ops = out.body.block().ops;
  if (!ops.empty() && cfg.is_terminator(ops.back())) ops.pop_back();

  std::size_t rdos = 0;
  for (const Operation& op : ops)
    if (cfg.is_rdo(op)) ++rdos;
  if (rdos == 0)
    throw Error(ErrorKind::NoRdo,
                "pattern @" + f.name +
                    " has no region-defining operation to anchor matching");
  if (rdos > 1)
    throw Error(ErrorKind::SequentialRdos,
                "pattern @" + f.name + " has " + std::to_string(rdos) +
                    " sequential top-level RDOs; only nested RDOs are "
                    "allowed in a pattern body");
  return out;
}

PatFile parse_pat_file(std::string_view text, const DialectConfig& cfg) {
  detail::Lexer lex(text);
  ValueId next_id = 0;
  detail::Parser parser(lex, next_id);
  PatFile file;
  std::set<std::string> names;

  while (!lex.at(detail::Tok::Eof)) {
    std::size_t begin = lex.offset();
    detail::Token start = lex.peek();

    expect_language(lex);
    lex.expect(detail::Tok::LBrace, "'{'");
    detail::Token pattern_at = lex.peek();
    FuncDef pattern = parser.parse_function();
    lex.expect(detail::Tok::RBrace, "'}' closing the pattern section");
    lex.expect(detail::Tok::Equal, "'=' between pattern and replacement");
    if (lex.at(detail::Tok::Ident)) expect_language(lex);
    lex.expect(detail::Tok::LBrace, "'{'");
    detail::Token replacement_at = lex.peek();
    FuncDef replacement = parser.parse_function();
    detail::Token close = lex.expect(detail::Tok::RBrace,
                                     "'}' closing the replacement section");
    std::size_t end = close.offset + 1;

    if (signature(pattern) != signature(replacement))
      throw Error(ErrorKind::SignatureMismatch,
                  "replacement @" + replacement.name + signature(replacement) +
                      " does not have the signature of pattern @" +
                      pattern.name + signature(pattern),
                  start.line, start.column);
    if (!names.insert(pattern.name).second)
      throw Error(ErrorKind::DuplicateName,
                  "duplicate pattern name @" + pattern.name, start.line,
                  start.column);

    reject_violations(pattern, cfg, pattern_at, "pattern");
    reject_violations(replacement, cfg, replacement_at, "replacement");

    PatternPair pair;
    pair.name = pattern.name;
    PeeledWrapper peeled;
    try {
      peeled = peel_wrapper(pattern, cfg);
    } catch (const Error& e) {
      throw Error(e.kind(), e.detail(), pattern_at.line, pattern_at.column);
    }
    pair.pattern.name = pattern.name;
    pair.pattern.params = std::move(peeled.args);
    pair.pattern.body = std::move(peeled.body);
    pair.replacement = std::move(replacement);
    pair.source_span = {begin, end};
    file.pairs.push_back(std::move(pair));
  }
  return file;
}

}  // namespace smr
