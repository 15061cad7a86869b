// SPDX-License-Identifier: Apache-2.0
//
// Data-dependency matching.
//
// A DDG is a rooted DAG over operations. Data edges run from a user to the
// definition of each operand and are numbered by operand position (1, 2,
// ...). Region edges run from an RDO to every potential root (an op that
// defines no value) directly inside one of its regions and are lettered by
// region (A, B, ...). Each node label carries the color of the region it
// lives in, so `2_core.cmpi[predicate=eq]` is a cmpi in region 2.
//
// Graphs are linearized into data-strings, one per root-to-leaf path:
//
//   0_core.if B 2_core.if 1 2_core.cmpi[predicate=eq] 2 0_core.constant[value=1:i64]
//
// Pattern strings are merged into a trie. In patterns, wrapper arguments are
// wildcard leaves `ANY:<type>` that absorb any value of that type defined
// outside the candidate fragment. A string-level acceptance is then
// confirmed by a rooted DAG isomorphism walk that also yields the wildcard
// bindings used for rewriting.

#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smr/cdg.h"
#include "smr/ir.h"
#include "smr/pat.h"
#include "smr/trie.h"

namespace smr {

inline constexpr std::size_t kDefaultPathCap = 10000;
inline constexpr ValueId kNoValue = std::numeric_limits<ValueId>::max();

struct EdgeLabel {
  enum class Kind { Data, Region };
  Kind kind = Kind::Data;
  unsigned index = 0;  // Data: 1-based operand position; Region: 0-based

  static EdgeLabel data(unsigned k) { return {Kind::Data, k}; }
  static EdgeLabel region(unsigned r) { return {Kind::Region, r}; }
  std::string str() const;

  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
  friend auto operator<=>(const EdgeLabel&, const EdgeLabel&) = default;
};

enum class NodeKind {
  Op,        // an operation
  Wildcard,  // pattern wrapper argument
  BlockArg,  // argument of a region inside the fragment
  ExtArg,    // input value with no visible defining op
};

struct DdgNode {
  std::size_t id = 0;
  NodeKind kind = NodeKind::Op;
  const Operation* op = nullptr;
  unsigned arg_index = 0;
  ValueId value = kNoValue;
  Type type;
  int color = 0;
  /// Input graphs: the node is defined outside the candidate fragment and
  /// may be absorbed by a wildcard.
  bool external = false;
  std::string label;
};

struct DdgEdge {
  std::size_t src = 0;
  std::size_t dst = 0;
  EdgeLabel label;
};

struct DdgGraph {
  std::vector<DdgNode> nodes;
  std::vector<DdgEdge> edges;
  /// Outgoing edge indexes per node, ordered data edges first by operand
  /// position, then region edges by letter and program order.
  std::vector<std::vector<std::size_t>> out;
  std::size_t root = 0;
  std::optional<std::size_t> pattern;          // pattern graphs
  std::size_t arg_count = 0;                   // pattern graphs
  const Operation* candidate_root = nullptr;   // input graphs

  /// Stable textual description: one line per node, then one per edge.
  std::string dump() const;
};

using RegionColors = std::map<const Region*, int>;

/// Colors the regions below `root`: root's own regions get 1..k, then the
/// regions of nested RDOs in pre-order of RDO occurrence. The enclosing
/// region is color 0 and is not listed.
RegionColors color_regions(const Operation& root);

DdgGraph build_pat_ddg(const PatternPair& pair, const DialectConfig& cfg,
                       std::size_t pattern_index = 0);
DdgGraph build_in_ddg(const Operation& root, const DefUseIndex& index,
                      const DialectConfig& cfg);

struct PathNode {
  std::size_t id = 0;
  Type type;
  bool absorbable = false;
};

/// One root-to-leaf path. `tokens` alternates node and edge labels;
/// `nodes` lists the graph nodes visited.
struct DataString {
  std::vector<std::string> tokens;
  std::vector<PathNode> nodes;

  std::string str() const;
};

/// Every root-to-leaf path as a multiset, in depth-first order. Throws
/// ExplosionGuard once the count exceeds `path_cap`.
std::vector<DataString> stringify_ddg(const DdgGraph& g,
                                      std::size_t path_cap = kDefaultPathCap);

class DdgAutomaton {
 public:
  using StateId = PrefixTrie<std::string>::StateId;

  explicit DdgAutomaton(
      const std::vector<std::vector<DataString>>& pattern_sets);

  /// Patterns whose string multiset can be put in bijection with
  /// `candidate`, where a pattern string ending in `ANY:<t>` stands for the
  /// whole subtree below an absorbable candidate node of type t.
  std::vector<std::size_t> run(const std::vector<DataString>& candidate) const;

  std::size_t state_count() const { return trie_.size(); }
  /// state -> pattern -> multiplicity
  const std::map<StateId, std::map<std::size_t, std::size_t>>& finals() const {
    return finals_;
  }
  /// States with an outgoing `ANY:<type>` transition.
  const std::set<StateId>& wildcard_states() const { return wildcard_states_; }
  std::size_t string_count(std::size_t pattern) const {
    return string_counts_.at(pattern);
  }
  std::size_t pattern_count() const { return string_counts_.size(); }
  const PrefixTrie<std::string>& trie() const { return trie_; }
  std::string dump() const;

  /// Search steps allowed per (candidate, pattern) before the run gives up
  /// and reports the pattern, leaving the decision to verification.
  void set_search_budget(std::size_t steps) { budget_ = steps; }

 private:
  PrefixTrie<std::string> trie_;
  std::map<StateId, std::map<std::size_t, std::size_t>> finals_;
  std::set<StateId> wildcard_states_;
  std::vector<std::size_t> string_counts_;
  std::size_t budget_ = 1'000'000;
};

inline DdgAutomaton build_ddg_automaton(
    const std::vector<std::vector<DataString>>& pattern_sets) {
  return DdgAutomaton(pattern_sets);
}

inline std::vector<std::size_t> run_ddg_automaton(
    const DdgAutomaton& a, const std::vector<DataString>& candidate) {
  return a.run(candidate);
}

struct Binding {
  std::size_t pattern = 0;
  const Operation* root = nullptr;
  const FuncDef* function = nullptr;
  /// Input value bound to each wrapper argument, in wrapper order.
  std::vector<ValueId> arg_map;
  /// Input operations that are images of pattern operations.
  std::set<const Operation*> matched_ops;
};

/// Rooted isomorphism walk: labels, types and sharing must agree, and each
/// wildcard must bind one external value of its type consistently.
std::optional<Binding> verify_and_bind(const DdgGraph& candidate,
                                       const DdgGraph& pattern);

/// Everything derived once from a PAT file for the data-dependency phase.
struct DdgPatternSet {
  std::vector<DdgGraph> graphs;
  std::vector<std::vector<DataString>> strings;
  DdgAutomaton automaton;
};

/// Builds pattern graphs, strings and the automaton. Throws UnreachableOp,
/// UnbindableArg or ExplosionGuard for malformed patterns.
DdgPatternSet build_ddg_patterns(const PatFile& pats, const DialectConfig& cfg,
                                 std::size_t path_cap = kDefaultPathCap);

struct DdgMatchResult {
  /// matches[i] holds the bindings of pattern i in input order.
  std::vector<std::vector<Binding>> matches;
  /// Candidates accepted by the automaton for at least one pattern.
  std::size_t string_accepted = 0;
  /// (candidate, pattern) pairs accepted by strings but refuted by the
  /// isomorphism walk.
  std::size_t refuted = 0;
  std::vector<std::string> warnings;
  /// Wall-clock split between graph/string/automaton work and verification.
  double strings_ms = 0;
  double verify_ms = 0;
};

DdgMatchResult ddg_match(const std::vector<Candidate>& candidates,
                         const DdgPatternSet& patterns,
                         const DefUseIndex& index, const DialectConfig& cfg,
                         std::size_t path_cap = kDefaultPathCap);

}  // namespace smr
