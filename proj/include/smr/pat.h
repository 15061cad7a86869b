// SPDX-License-Identifier: Apache-2.0
//
// PAT files: a list of `ir { <pattern func> } = ir { <replacement func> }`
// pairs. The pattern wrapper is peeled down to its body; its parameters
// become the typed wildcards of the idiom.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smr/ir.h"

namespace smr {

struct PatternPair {
  std::string name;
  /// Peeled pattern: the wrapper's parameters (the wildcards) and its body
  /// with the trailing terminator removed.
  FuncDef pattern;
  /// Replacement wrapper, kept whole.
  FuncDef replacement;
  /// Byte range of the pair in the PAT text.
  std::pair<std::size_t, std::size_t> source_span{0, 0};

  const std::vector<Param>& args() const { return pattern.params; }
  const Region& body() const { return pattern.body; }
};

struct PatFile {
  std::vector<PatternPair> pairs;
};

struct PeeledWrapper {
  std::vector<Param> args;
  Region body;
};

/// Strips the wrapper shell: keeps the typed parameter list and the body
/// without its trailing terminator. Throws SequentialRdos when the body
/// holds more than one top-level RDO and NoRdo when it holds none.
PeeledWrapper peel_wrapper(const FuncDef& f, const DialectConfig& cfg);

/// Parses, validates and peels every pair. Besides syntax errors this
/// rejects unsupported language tags, signature mismatches, duplicate
/// names, and pattern bodies violating the single-block, single-result or
/// single-top-level-RDO constraints (each with its own ErrorKind).
PatFile parse_pat_file(std::string_view text,
                       const DialectConfig& cfg = DialectConfig::core());

}  // namespace smr
