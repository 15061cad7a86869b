// SPDX-License-Identifier: Apache-2.0
//
// String-set automaton for data-strings.
//
// A candidate's strings are paths of one unfolded tree. Running the
// automaton means choosing a cut through that tree: every candidate path
// either matches a pattern string exactly or is absorbed at some node by a
// pattern string ending in `ANY:<type>`, in which case every path through
// that node is absorbed with it. Pattern i is accepted when some cut uses
// each of its strings exactly as many times as it occurs.

#include <unordered_map>

#include "smr/ddg.h"

namespace smr {

namespace {

constexpr std::string_view kWildcardPrefix = "ANY:";

struct TreeNode {
  std::string label;
  Type type;
  bool absorbable = false;
  std::vector<std::pair<std::string, std::size_t>> children;  // edge label
};

/// Rebuilds the unfolded tree from its root-to-leaf paths.
std::vector<TreeNode> unfold(const std::vector<DataString>& strings) {
  std::vector<TreeNode> tree;
  if (strings.empty()) return tree;
  std::map<std::tuple<std::size_t, std::string, std::size_t>, std::size_t> index;
  const DataString& first = strings.front();
  tree.push_back(TreeNode{first.tokens[0], first.nodes[0].type,
                          first.nodes[0].absorbable, {}});
  for (const DataString& s : strings) {
    std::size_t at = 0;
    for (std::size_t k = 1; k < s.nodes.size(); ++k) {
      const std::string& edge = s.tokens[2 * k - 1];
      auto key = std::make_tuple(at, edge, s.nodes[k].id);
      auto it = index.find(key);
      if (it == index.end()) {
        std::size_t id = tree.size();
        tree.push_back(TreeNode{s.tokens[2 * k], s.nodes[k].type,
                                s.nodes[k].absorbable, {}});
        tree[at].children.emplace_back(edge, id);
        it = index.emplace(key, id).first;
      }
      at = it->second;
    }
  }
  return tree;
}

class CutSearch {
 public:
  using StateId = DdgAutomaton::StateId;

  CutSearch(const PrefixTrie<std::string>& trie,
            const std::vector<TreeNode>& tree,
            std::unordered_map<StateId, std::size_t> counts,
            std::size_t budget)
      : trie_(trie), tree_(tree), counts_(std::move(counts)), budget_(budget) {
    for (const auto& [s, c] : counts_) remaining_ += c;
  }

  bool run() {
    if (tree_.empty()) return false;
    todo_.push_back(Frame{0, PrefixTrie<std::string>::kStart});
    return search();
  }

 private:
  struct Frame {
    std::size_t node;
    StateId before;  // state reached just before this node's label
  };

  bool take(StateId s) {
    auto it = counts_.find(s);
    if (it == counts_.end() || it->second == 0) return false;
    --it->second;
    --remaining_;
    bool ok = search();
    ++it->second;
    ++remaining_;
    return ok;
  }

  bool search() {
    if (budget_ == 0) return true;  // undecided; verification will decide
    --budget_;
    if (todo_.empty()) return remaining_ == 0;
    if (todo_.size() > remaining_) return false;

    Frame f = todo_.back();
    todo_.pop_back();
    const TreeNode& n = tree_[f.node];
    bool ok = false;

    if (n.absorbable && !n.type.empty())
      if (auto w = trie_.step(f.before, std::string(kWildcardPrefix) + n.type.str()))
        ok = take(*w);

    if (!ok)
      if (auto s = trie_.step(f.before, n.label)) {
        if (n.children.empty()) {
          ok = take(*s);
        } else {
          std::size_t pushed = 0;
          bool viable = true;
          // Reverse so the first child is explored first.
          for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
            auto e = trie_.step(*s, it->first);
            if (!e) {
              viable = false;
              break;
            }
            todo_.push_back(Frame{it->second, *e});
            ++pushed;
          }
          if (viable) ok = search();
          todo_.resize(todo_.size() - pushed);
        }
      }

    todo_.push_back(f);
    return ok;
  }

  const PrefixTrie<std::string>& trie_;
  const std::vector<TreeNode>& tree_;
  std::unordered_map<StateId, std::size_t> counts_;
  std::size_t remaining_ = 0;
  std::size_t budget_;
  std::vector<Frame> todo_;
};

}  // namespace

DdgAutomaton::DdgAutomaton(
    const std::vector<std::vector<DataString>>& pattern_sets) {
  string_counts_.resize(pattern_sets.size(), 0);
  for (std::size_t p = 0; p < pattern_sets.size(); ++p)
    for (const DataString& s : pattern_sets[p]) {
      StateId end = trie_.insert(s.tokens);
      ++finals_[end][p];
      ++string_counts_[p];
    }
  for (StateId s = 0; s < trie_.size(); ++s)
    for (const auto& [tok, to] : trie_.transitions(s))
      if (std::string_view(tok).starts_with(kWildcardPrefix)) {
        wildcard_states_.insert(s);
        break;
      }
}

std::vector<std::size_t> DdgAutomaton::run(
    const std::vector<DataString>& candidate) const {
  std::vector<TreeNode> tree = unfold(candidate);
  std::vector<std::unordered_map<StateId, std::size_t>> counts(
      string_counts_.size());
  for (const auto& [state, per_pattern] : finals_)
    for (const auto& [p, mult] : per_pattern) counts[p][state] = mult;

  std::vector<std::size_t> accepted;
  for (std::size_t p = 0; p < string_counts_.size(); ++p)
    if (CutSearch(trie_, tree, counts[p], budget_).run()) accepted.push_back(p);
  return accepted;
}

std::string DdgAutomaton::dump() const {
  std::string out = "ddg-automaton states=" + std::to_string(trie_.size()) + "\n";
  for (StateId s = 0; s < trie_.size(); ++s) {
    out += "  s" + std::to_string(s);
    if (auto it = finals_.find(s); it != finals_.end()) {
      out += " final{";
      bool first = true;
      for (const auto& [p, mult] : it->second) {
        if (!first) out += ",";
        first = false;
        out += std::to_string(p) + "x" + std::to_string(mult);
      }
      out += "}";
    }
    if (wildcard_states_.contains(s)) out += " wildcard";
    out += "\n";
    for (const auto& [tok, to] : trie_.transitions(s))
      out += "    " + tok + " -> s" + std::to_string(to) + "\n";
  }
  return out;
}

}  // namespace smr
