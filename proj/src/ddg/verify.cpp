// SPDX-License-Identifier: Apache-2.0
//
// Rooted DAG isomorphism between a pattern graph and a candidate graph,
// with wildcard absorption. String acceptance is necessary but not
// sufficient: it ignores node sharing and binding consistency.

#include <algorithm>
#include <chrono>

#include "smr/ddg.h"
#include "smr/error.h"

namespace smr {

namespace {

constexpr std::size_t kUnmapped = static_cast<std::size_t>(-1);

class IsoWalk {
 public:
  IsoWalk(const DdgGraph& cand, const DdgGraph& pat)
      : cand_(cand),
        pat_(pat),
        p2c_(pat.nodes.size(), kUnmapped),
        c2p_(cand.nodes.size(), kUnmapped),
        bound_(pat.arg_count, kNoValue) {}

  std::optional<Binding> run() {
    std::vector<Item> pending{Item{pat_.root, cand_.root, {}, {}}};
    if (!solve(std::move(pending))) return std::nullopt;

    Binding b;
    b.pattern = pat_.pattern.value_or(0);
    b.root = cand_.candidate_root;
    b.arg_map = bound_;
    for (ValueId v : b.arg_map)
      if (v == kNoValue) return std::nullopt;
    for (std::size_t p = 0; p < p2c_.size(); ++p)
      if (p2c_[p] != kUnmapped && pat_.nodes[p].kind == NodeKind::Op)
        b.matched_ops.insert(cand_.nodes[p2c_[p]].op);
    return b;
  }

 private:
  /// Either a node pair, or (when `ps` is non-empty) a group of
  /// interchangeable children to be paired up in some order.
  struct Item {
    std::size_t p, c;
    std::vector<std::size_t> ps, cs;
  };

  enum class Slot { P2C, C2P, Bound };
  struct Undo {
    Slot slot;
    std::size_t index;
    std::size_t old;
    ValueId old_value;
  };

  void set_p2c(std::size_t p, std::size_t c) {
    trail_.push_back({Slot::P2C, p, p2c_[p], 0});
    p2c_[p] = c;
  }
  void set_c2p(std::size_t c, std::size_t p) {
    trail_.push_back({Slot::C2P, c, c2p_[c], 0});
    c2p_[c] = p;
  }
  void set_bound(std::size_t arg, ValueId v) {
    trail_.push_back({Slot::Bound, arg, 0, bound_[arg]});
    bound_[arg] = v;
  }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const Undo& u = trail_.back();
      switch (u.slot) {
        case Slot::P2C: p2c_[u.index] = u.old; break;
        case Slot::C2P: c2p_[u.index] = u.old; break;
        case Slot::Bound: bound_[u.index] = u.old_value; break;
      }
      trail_.pop_back();
    }
  }

  bool solve(std::vector<Item> pending) {
    while (!pending.empty()) {
      Item it = std::move(pending.back());
      pending.pop_back();
      if (it.ps.empty()) {
        if (!pair(it.p, it.c, pending)) return false;
        continue;
      }
      std::size_t p = it.ps.back();
      it.ps.pop_back();
      for (std::size_t k = 0; k < it.cs.size(); ++k) {
        std::size_t mark = trail_.size();
        std::vector<Item> next = pending;
        Item rest = it;
        rest.cs.erase(rest.cs.begin() + static_cast<std::ptrdiff_t>(k));
        if (!rest.ps.empty()) next.push_back(std::move(rest));
        next.push_back(Item{p, it.cs[k], {}, {}});
        if (solve(std::move(next))) return true;
        undo(mark);
      }
      return false;
    }
    return true;
  }

  bool pair(std::size_t p, std::size_t c, std::vector<Item>& pending) {
    const DdgNode& pn = pat_.nodes[p];
    const DdgNode& cn = cand_.nodes[c];

    if (pn.kind == NodeKind::Wildcard) {
      if (!cn.external || cn.value == kNoValue || cn.type != pn.type) return false;
      ValueId have = bound_[pn.arg_index];
      if (have != kNoValue) return have == cn.value;
      set_bound(pn.arg_index, cn.value);
      return true;
    }

    if (p2c_[p] != kUnmapped) return p2c_[p] == c;
    if (c2p_[c] != kUnmapped) return false;
    if (pn.label != cn.label || pn.type != cn.type) return false;

    const auto& pout = pat_.out[p];
    const auto& cout = cand_.out[c];
    if (pout.size() != cout.size()) return false;
    for (std::size_t i = 0; i < pout.size(); ++i)
      if (pat_.edges[pout[i]].label != cand_.edges[cout[i]].label) return false;

    set_p2c(p, c);
    set_c2p(c, p);

    // Data edges carry distinct labels; region edges sharing a letter are
    // interchangeable and grouped further by target label.
    std::size_t i = 0;
    while (i < pout.size()) {
      EdgeLabel label = pat_.edges[pout[i]].label;
      std::size_t j = i;
      while (j < pout.size() && pat_.edges[pout[j]].label == label) ++j;
      if (j - i == 1) {
        pending.push_back(Item{pat_.edges[pout[i]].dst, cand_.edges[cout[i]].dst, {}, {}});
      } else {
        std::map<std::string, Item> groups;
        for (std::size_t k = i; k < j; ++k) {
          std::size_t pd = pat_.edges[pout[k]].dst;
          std::size_t cd = cand_.edges[cout[k]].dst;
          groups[pat_.nodes[pd].label].ps.push_back(pd);
          groups[cand_.nodes[cd].label].cs.push_back(cd);
        }
        for (auto& [label_text, g] : groups) {
          if (g.ps.size() != g.cs.size()) return false;
          if (g.ps.size() == 1) {
            pending.push_back(Item{g.ps[0], g.cs[0], {}, {}});
          } else {
            std::reverse(g.ps.begin(), g.ps.end());
            pending.push_back(std::move(g));
          }
        }
      }
      i = j;
    }
    return true;
  }

  const DdgGraph& cand_;
  const DdgGraph& pat_;
  std::vector<std::size_t> p2c_;
  std::vector<std::size_t> c2p_;
  std::vector<ValueId> bound_;
  std::vector<Undo> trail_;
};

}  // namespace

std::optional<Binding> verify_and_bind(const DdgGraph& candidate,
                                       const DdgGraph& pattern) {
  return IsoWalk(candidate, pattern).run();
}

DdgPatternSet build_ddg_patterns(const PatFile& pats, const DialectConfig& cfg,
                                 std::size_t path_cap) {
  std::vector<DdgGraph> graphs;
  std::vector<std::vector<DataString>> strings;
  for (std::size_t i = 0; i < pats.pairs.size(); ++i) {
    const PatternPair& pair = pats.pairs[i];
    DdgGraph g = build_pat_ddg(pair, cfg, i);
    std::vector<bool> present(pair.args().size(), false);
    for (const DdgNode& n : g.nodes)
      if (n.kind == NodeKind::Wildcard) present[n.arg_index] = true;
    for (std::size_t a = 0; a < present.size(); ++a)
      if (!present[a])
        throw Error(ErrorKind::UnbindableArg,
                    "argument %" + pair.args()[a].name + " of pattern @" +
                        pair.name +
                        " is never used by the idiom and cannot be bound");
    strings.push_back(stringify_ddg(g, path_cap));
    graphs.push_back(std::move(g));
  }
  DdgAutomaton automaton(strings);
  return DdgPatternSet{std::move(graphs), std::move(strings), std::move(automaton)};
}

DdgMatchResult ddg_match(const std::vector<Candidate>& candidates,
                         const DdgPatternSet& patterns,
                         const DefUseIndex& index, const DialectConfig& cfg,
                         std::size_t path_cap) {
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
  };
  DdgMatchResult result;
  result.matches.resize(patterns.graphs.size());
  for (const Candidate& cand : candidates) {
    Clock::time_point t0 = Clock::now();
    DdgGraph g;
    std::vector<DataString> strings;
    try {
      g = build_in_ddg(*cand.root, index, cfg);
      strings = stringify_ddg(g, path_cap);
    } catch (const Error& e) {
      const FuncDef* f = index.function_of(cand.root);
      result.warnings.push_back("skipping candidate @" +
                                (f ? f->name : std::string("?")) + ":" +
                                index.path(cand.root) + ": " + e.what());
      result.strings_ms += ms(t0, Clock::now());
      continue;
    }
    // Only patterns that also control-matched this RDO are eligible.
    std::vector<std::size_t> accepted;
    for (std::size_t p : patterns.automaton.run(strings))
      if (std::find(cand.patterns.begin(), cand.patterns.end(), p) !=
          cand.patterns.end())
        accepted.push_back(p);
    if (!accepted.empty()) ++result.string_accepted;
    Clock::time_point t1 = Clock::now();
    result.strings_ms += ms(t0, t1);
    for (std::size_t p : accepted) {
      std::optional<Binding> b = verify_and_bind(g, patterns.graphs[p]);
      if (!b) {
        ++result.refuted;
        continue;
      }
      b->function = cand.function ? cand.function : index.function_of(cand.root);
      result.matches[p].push_back(std::move(*b));
    }
    result.verify_ms += ms(t1, Clock::now());
  }
  return result;
}

}  // namespace smr
