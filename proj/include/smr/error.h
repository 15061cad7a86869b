// SPDX-License-Identifier: Apache-2.0
//
// Error type shared by every stage of the matcher.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smr {

enum class ErrorKind {
  // Textual input.
  Syntax,
  UndefinedValue,
  DuplicateValue,
  TypeMismatch,
  UnsupportedLanguage,
  SignatureMismatch,
  DuplicateName,
  Config,
  // Structural constraints on patterns.
  SequentialRdos,
  NoRdo,
  MultiBlockRegion,
  MultiResult,
  ArityMismatch,
  MissingTerminator,
  // Graph construction and matching.
  UnreachableOp,
  UnbindableArg,
  ExplosionGuard,
  // Rewriting.
  BrokenUse,
  // Interpretation.
  FuelExhausted,
  OutOfBounds,
  UnknownOp,
  UnknownFunction,
  InterpTypeMismatch,
};

std::string_view to_string(ErrorKind kind);

/// A recoverable failure. `line`/`column` are 1-based and zero when the
/// error has no source position.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, unsigned line = 0,
        unsigned column = 0);

  ErrorKind kind() const noexcept { return kind_; }
  unsigned line() const noexcept { return line_; }
  unsigned column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  unsigned line_;
  unsigned column_;
  std::string detail_;
};

}  // namespace smr
