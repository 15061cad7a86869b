// SPDX-License-Identifier: Apache-2.0
//
// Control-dependency matching. A control-string linearizes the region
// structure under an RDO:
//
//   "core.if" { SEQ } { SEQ "core.if" { SEQ } { SEQ } SEQ }
//
// where SEQ stands for a maximal non-empty run of non-RDO operations.
// Pattern strings are merged into a trie; an input RDO is a candidate when
// its string ends in a final state.

#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "smr/ir.h"
#include "smr/pat.h"
#include "smr/trie.h"

namespace smr {

struct ControlToken {
  enum class Kind { Rdo, Open, Close, Seq };
  Kind kind = Kind::Seq;
  std::string name;  // Rdo only

  static ControlToken rdo(std::string n) { return {Kind::Rdo, std::move(n)}; }
  static ControlToken open() { return {Kind::Open, {}}; }
  static ControlToken close() { return {Kind::Close, {}}; }
  static ControlToken seq() { return {Kind::Seq, {}}; }

  friend bool operator==(const ControlToken&, const ControlToken&) = default;
  friend auto operator<=>(const ControlToken&, const ControlToken&) = default;
};

struct ControlString {
  std::vector<ControlToken> tokens;
  const Operation* root = nullptr;
  const FuncDef* function = nullptr;

  /// One-line form: `"core.if" { SEQ } { SEQ }`.
  std::string str() const;
  /// Indented multi-line form, one token per line.
  std::string indented() const;
};

/// Control-string of a peeled pattern body, rooted at its single top-level
/// RDO. Ops before the RDO are not part of the string.
ControlString pattern_control_string(const Region& body,
                                     const DialectConfig& cfg);

/// Control-string rooted at one RDO.
ControlString control_string(const Operation& rdo, const DialectConfig& cfg);

/// One string per RDO anywhere in `m` (nested ones included), in pre-order.
std::vector<ControlString> input_control_strings(const ModuleIR& m,
                                                 const DialectConfig& cfg);

class CdgAutomaton {
 public:
  using StateId = PrefixTrie<ControlToken>::StateId;

  explicit CdgAutomaton(const std::vector<ControlString>& pattern_strings);

  /// Indexes of every pattern whose string equals `s` token for token.
  std::vector<std::size_t> run(const ControlString& s) const;

  std::size_t state_count() const { return trie_.size(); }
  const std::map<StateId, std::set<std::size_t>>& finals() const {
    return finals_;
  }
  const PrefixTrie<ControlToken>& trie() const { return trie_; }
  std::string dump() const;

 private:
  PrefixTrie<ControlToken> trie_;
  std::map<StateId, std::set<std::size_t>> finals_;
};

inline CdgAutomaton build_cdg_automaton(
    const std::vector<ControlString>& pattern_strings) {
  return CdgAutomaton(pattern_strings);
}

struct Candidate {
  const Operation* root = nullptr;
  const FuncDef* function = nullptr;
  std::vector<std::size_t> patterns;
};

struct CdgResult {
  std::size_t rdos_seen = 0;
  std::vector<Candidate> candidates;
};

CdgResult cdg_match(const ModuleIR& input, const CdgAutomaton& automaton,
                    const DialectConfig& cfg);

/// Convenience overload that builds the automaton from `patterns`.
CdgResult cdg_match(const ModuleIR& input,
                    const std::vector<PatternPair>& patterns,
                    const DialectConfig& cfg);

}  // namespace smr
