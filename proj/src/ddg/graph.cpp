// SPDX-License-Identifier: Apache-2.0
//
// DDG construction and linearization.

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "smr/ddg.h"
#include "smr/error.h"

namespace smr {

std::string EdgeLabel::str() const {
  if (kind == Kind::Data) return std::to_string(index);
  std::string s;
  unsigned r = index;
  do {
    s.insert(s.begin(), static_cast<char>('A' + r % 26));
    r /= 26;
  } while (r-- > 0);
  return s;
}

std::string DataString::str() const {
  std::string s;
  for (const std::string& t : tokens) {
    if (!s.empty()) s += ' ';
    s += t;
  }
  return s;
}

RegionColors color_regions(const Operation& root) {
  RegionColors colors;
  int next = 1;
  auto visit = [&](const Operation& rdo, auto&& self) -> void {
    for (const Region& r : rdo.regions) colors[&r] = next++;
    for (const Region& r : rdo.regions)
      for (const Block& b : r.blocks)
        for (const Operation& op : b.ops)
          if (!op.regions.empty()) self(op, self);
  };
  visit(root, visit);
  return colors;
}

namespace {

std::string attr_signature(const Operation& op, const DialectConfig& cfg) {
  auto it = cfg.match_attrs.find(op.name);
  if (it == cfg.match_attrs.end()) return {};
  std::vector<std::string> keys = it->second;
  std::sort(keys.begin(), keys.end());
  std::string sig;
  for (const std::string& k : keys) {
    const AttrValue* v = op.attr(k);
    if (!v) continue;
    if (!sig.empty()) sig += ',';
    sig += k + "=" + format_attr_compact(*v);
  }
  return sig.empty() ? sig : "[" + sig + "]";
}

class Builder {
 public:
  Builder(const DialectConfig& cfg, const DefUseIndex& index,
          const Operation& root, bool pattern_mode)
      : cfg_(cfg),
        index_(index),
        colors_(color_regions(root)),
        pattern_mode_(pattern_mode) {
    internal_.insert(&root);
    for (const Region& r : root.regions)
      walk_ops(r, [&](const Operation& op) { internal_.insert(&op); });
  }

  void add_wildcards(const std::vector<Param>& params) {
    for (unsigned i = 0; i < params.size(); ++i) wildcard_args_[params[i].id] = i;
  }

  std::size_t op_node(const Operation& op) {
    if (auto it = op_nodes_.find(&op); it != op_nodes_.end()) return it->second;
    bool internal = internal_.contains(&op);
    DdgNode n;
    n.kind = NodeKind::Op;
    n.op = &op;
    n.color = internal ? color_of(op) : 0;
    n.external = !pattern_mode_ && !internal;
    if (const Result* r = op.result()) {
      n.type = r->type;
      n.value = r->id;
    }
    n.label = std::to_string(n.color) + "_" + op.name + attr_signature(op, cfg_);
    std::size_t id = add(std::move(n));
    op_nodes_.emplace(&op, id);

    for (unsigned k = 0; k < op.operands.size(); ++k)
      edge(id, value_node(op.operands[k]), EdgeLabel::data(k + 1));
    if (internal && cfg_.is_rdo(op)) {
      for (unsigned r = 0; r < op.regions.size(); ++r)
        for (const Block& b : op.regions[r].blocks)
          for (const Operation& inner : b.ops)
            if (cfg_.is_potential_root(inner))
              edge(id, op_node(inner), EdgeLabel::region(r));
    }
    return id;
  }

  DdgGraph finish(std::size_t root) {
    graph_.root = root;
    graph_.out.assign(graph_.nodes.size(), {});
    for (std::size_t e = 0; e < graph_.edges.size(); ++e)
      graph_.out[graph_.edges[e].src].push_back(e);
    for (auto& list : graph_.out)
      std::stable_sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
        return graph_.edges[a].label < graph_.edges[b].label;
      });
    return std::move(graph_);
  }

  bool has_node(const Operation& op) const { return op_nodes_.contains(&op); }

 private:
  int color_of(const Operation& op) const {
    auto it = colors_.find(index_.parent_region(&op));
    return it == colors_.end() ? 0 : it->second;
  }

  std::size_t add(DdgNode n) {
    n.id = graph_.nodes.size();
    graph_.nodes.push_back(std::move(n));
    return graph_.nodes.back().id;
  }

  void edge(std::size_t src, std::size_t dst, EdgeLabel label) {
    graph_.edges.push_back(DdgEdge{src, dst, label});
  }

  std::size_t value_node(ValueId v) {
    if (auto it = value_nodes_.find(v); it != value_nodes_.end()) return it->second;

    if (auto w = wildcard_args_.find(v); w != wildcard_args_.end()) {
      DdgNode n;
      n.kind = NodeKind::Wildcard;
      n.arg_index = w->second;
      n.value = v;
      n.type = index_.def(v)->type;
      n.label = "ANY:" + n.type.str();
      return value_nodes_[v] = add(std::move(n));
    }

    const DefSite* def = index_.def(v);
    if (def && def->kind == DefKind::OpResult) return op_node(*def->op);

    DdgNode n;
    n.value = v;
    if (def) n.type = def->type;
    auto color = def && def->kind == DefKind::BlockArg ? colors_.find(def->region)
                                                       : colors_.end();
    if (color != colors_.end()) {
      n.kind = NodeKind::BlockArg;
      n.arg_index = def->index;
      n.color = color->second;
      n.label = std::to_string(n.color) + "_ARG" + std::to_string(def->index) +
                ":" + n.type.str();
    } else {
      n.kind = NodeKind::ExtArg;
      n.external = true;
      n.label = "ARGEXT:" + n.type.str();
    }
    return value_nodes_[v] = add(std::move(n));
  }

  const DialectConfig& cfg_;
  const DefUseIndex& index_;
  RegionColors colors_;
  bool pattern_mode_;
  std::unordered_set<const Operation*> internal_;
  std::unordered_map<ValueId, unsigned> wildcard_args_;
  std::unordered_map<const Operation*, std::size_t> op_nodes_;
  std::unordered_map<ValueId, std::size_t> value_nodes_;
  DdgGraph graph_;
};

const Operation* top_level_rdo(const Region& body, const DialectConfig& cfg) {
  for (const Block& b : body.blocks)
    for (const Operation& op : b.ops)
      if (cfg.is_rdo(op)) return &op;
  return nullptr;
}

[[noreturn]] void unreachable(const Operation& op, const DefUseIndex& index,
                              const std::string& where) {
  throw Error(ErrorKind::UnreachableOp,
              "'" + op.name + "' at op " + index.path(&op) + " in " + where +
                  " is not reachable from the root; the data-dependency "
                  "graph would be disconnected");
}

}  // namespace

DdgGraph build_pat_ddg(const PatternPair& pair, const DialectConfig& cfg,
                       std::size_t pattern_index) {
  const Operation* root = top_level_rdo(pair.body(), cfg);
  if (!root)
    throw Error(ErrorKind::NoRdo, "pattern @" + pair.name + " has no RDO");
  DefUseIndex index(pair.pattern);
  Builder b(cfg, index, *root, /*pattern_mode=*/true);
  b.add_wildcards(pair.args());
  std::size_t r = b.op_node(*root);
  walk_ops(pair.body(), [&](const Operation& op) {
    if (!b.has_node(op)) unreachable(op, index, "pattern @" + pair.name);
  });
  DdgGraph g = b.finish(r);
  g.pattern = pattern_index;
  g.arg_count = pair.args().size();
  return g;
}

DdgGraph build_in_ddg(const Operation& root, const DefUseIndex& index,
                      const DialectConfig& cfg) {
  Builder b(cfg, index, root, /*pattern_mode=*/false);
  std::size_t r = b.op_node(root);
  for (const Region& region : root.regions)
    walk_ops(region, [&](const Operation& op) {
      if (!b.has_node(op)) {
        const FuncDef* f = index.function_of(&root);
        unreachable(op, index, "candidate in @" + (f ? f->name : std::string("?")));
      }
    });
  DdgGraph g = b.finish(r);
  g.candidate_root = &root;
  return g;
}

std::vector<DataString> stringify_ddg(const DdgGraph& g, std::size_t path_cap) {
  std::vector<DataString> out;
  DataString path;
  auto dfs = [&](std::size_t n, auto&& self) -> void {
    const DdgNode& node = g.nodes[n];
    path.tokens.push_back(node.label);
    path.nodes.push_back(PathNode{n, node.type, node.external});
    if (g.out[n].empty()) {
      if (out.size() >= path_cap)
        throw Error(ErrorKind::ExplosionGuard,
                    "more than " + std::to_string(path_cap) +
                        " data-string paths");
      out.push_back(path);
    } else {
      for (std::size_t e : g.out[n]) {
        path.tokens.push_back(g.edges[e].label.str());
        self(g.edges[e].dst, self);
        path.tokens.pop_back();
      }
    }
    path.tokens.pop_back();
    path.nodes.pop_back();
  };
  dfs(g.root, dfs);
  return out;
}

std::string DdgGraph::dump() const {
  std::string s;
  for (const DdgNode& n : nodes) {
    s += "node " + std::to_string(n.id) + " " + n.label;
    if (!n.type.empty()) s += " : " + n.type.str();
    if (n.id == root) s += " (root)";
    s += "\n";
  }
  for (std::size_t n = 0; n < out.size(); ++n)
    for (std::size_t e : out[n])
      s += "edge " + std::to_string(edges[e].src) + " -" + edges[e].label.str() +
           "-> " + std::to_string(edges[e].dst) + "\n";
  return s;
}

}  // namespace smr
