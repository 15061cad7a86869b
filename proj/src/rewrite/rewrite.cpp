// SPDX-License-Identifier: Apache-2.0

#include "smr/rewrite.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "smr/error.h"

namespace smr {

namespace {

std::unordered_set<const Operation*> fragment_ops(const Operation& root) {
  std::unordered_set<const Operation*> ops{&root};
  for (const Region& r : root.regions)
    walk_ops(r, [&](const Operation& op) { ops.insert(&op); });
  return ops;
}

std::string site(const Binding& b, const DefUseIndex& index) {
  const FuncDef* f = b.function ? b.function : index.function_of(b.root);
  return "@" + (f ? f->name : std::string("?")) + ":" + index.path(b.root);
}

/// Pairs every op of `from` with the op at the same position in `to`.
void map_ops(const Region& from, Region& to,
             std::unordered_map<const Operation*, Operation*>& out) {
  for (std::size_t b = 0; b < from.blocks.size(); ++b)
    for (std::size_t i = 0; i < from.blocks[b].ops.size(); ++i) {
      const Operation& a = from.blocks[b].ops[i];
      Operation& c = to.blocks[b].ops[i];
      out.emplace(&a, &c);
      for (std::size_t r = 0; r < a.regions.size(); ++r)
        map_ops(a.regions[r], c.regions[r], out);
    }
}

FuncDef renumber(const FuncDef& f, ValueId& next) {
  FuncDef g = f;
  std::unordered_map<ValueId, ValueId> ids;
  auto fresh = [&](ValueId& v) { v = ids[v] = next++; };
  for (Param& p : g.params) fresh(p.id);
  auto region = [&](Region& r, auto&& self) -> void {
    for (Block& b : r.blocks) {
      for (BlockArg& a : b.args) fresh(a.id);
      for (Operation& op : b.ops) {
        for (ValueId& v : op.operands)
          if (auto it = ids.find(v); it != ids.end()) v = it->second;
        for (Result& res : op.results) fresh(res.id);
        for (Region& nested : op.regions) self(nested, self);
      }
    }
  };
  region(g.body, region);
  return g;
}

std::size_t sweep(Region& r, const std::unordered_set<ValueId>& dead) {
  std::size_t removed = 0;
  for (Block& b : r.blocks) {
    removed += std::erase_if(b.ops, [&](const Operation& op) {
      return op.results.size() == 1 && dead.contains(op.results[0].id);
    });
    for (Operation& op : b.ops)
      for (Region& nested : op.regions) removed += sweep(nested, dead);
  }
  return removed;
}

}  // namespace

std::vector<Binding> select_nonoverlapping(
    const std::vector<std::vector<Binding>>& matches, const DefUseIndex& index,
    std::vector<std::string>* diagnostics) {
  std::vector<const Binding*> all;
  for (const auto& per_pattern : matches)
    for (const Binding& b : per_pattern) all.push_back(&b);
  std::stable_sort(all.begin(), all.end(), [&](const Binding* a, const Binding* b) {
    std::size_t oa = index.order(a->root), ob = index.order(b->root);
    return oa != ob ? oa < ob : a->pattern < b->pattern;
  });

  std::vector<Binding> selected;
  std::unordered_map<const Operation*, std::size_t> claimed;
  for (const Binding* b : all) {
    std::unordered_set<const Operation*> ops = fragment_ops(*b->root);
    const Operation* clash = nullptr;
    for (const Operation* op : ops)
      if (claimed.contains(op)) {
        clash = op;
        break;
      }
    if (clash) {
      if (diagnostics)
        diagnostics->push_back("dropped match of pattern #" +
                               std::to_string(b->pattern) + " at " +
                               site(*b, index) + ": overlaps match at " +
                               site(selected[claimed.at(clash)], index));
      continue;
    }
    for (const Operation* op : ops) claimed.emplace(op, selected.size());
    selected.push_back(*b);
  }
  return selected;
}

RewritePlan plan_rewrite(const ModuleIR& m,
                         const std::vector<std::vector<Binding>>& matches,
                         const PatFile& pats, const DefUseIndex& index) {
  RewritePlan plan;
  plan.selected = select_nonoverlapping(matches, index, &plan.diagnostics);

  std::set<std::size_t> used;
  for (const Binding& b : plan.selected) used.insert(b.pattern);

  std::set<std::string> taken;
  for (const FuncDef& f : m.functions) taken.insert(f.name);
  for (std::size_t p : used) {
    const FuncDef& repl = pats.pairs.at(p).replacement;
    if (plan.renames.contains(repl.name)) continue;
    std::string name = repl.name;
    for (unsigned k = 1; taken.contains(name); ++k)
      name = repl.name + "_smr" + std::to_string(k);
    taken.insert(name);
    plan.renames[repl.name] = name;
    FuncDef f = repl;
    f.name = name;
    plan.inserted_funcs.push_back(std::move(f));
  }
  return plan;
}

ModuleIR apply_rewrite(const ModuleIR& m, const RewritePlan& plan,
                       const PatFile& pats) {
  ModuleIR out = m;
  std::unordered_map<const Operation*, Operation*> image;
  for (std::size_t f = 0; f < m.functions.size(); ++f)
    map_ops(m.functions[f].body, out.functions[f].body, image);

  std::unordered_set<ValueId> maybe_dead;
  for (const Binding& b : plan.selected) {
    auto it = image.find(b.root);
    if (it == image.end())
      throw Error(ErrorKind::BrokenUse, "binding root is not part of the module");
    std::unordered_set<const Operation*> internal = fragment_ops(*b.root);
    for (const Operation* op : b.matched_ops)
      if (!internal.contains(op) && op->results.size() == 1 && op->regions.empty())
        maybe_dead.insert(op->results[0].id);

    const std::string& repl = pats.pairs.at(b.pattern).replacement.name;
    Operation call;
    call.name = "core.call";
    call.operands = b.arg_map;
    call.attributes["callee"] = SymbolAttr{plan.renames.at(repl)};
    *it->second = std::move(call);
  }
  image.clear();

  // Delete matched producers outside the fragments once nothing uses them.
  for (;;) {
    std::unordered_map<ValueId, std::size_t> uses;
    for (FuncDef& f : out.functions)
      walk_ops(f.body, [&](const Operation& op) {
        for (ValueId v : op.operands) ++uses[v];
      });
    std::unordered_set<ValueId> dead;
    for (ValueId v : maybe_dead)
      if (!uses.contains(v)) dead.insert(v);
    if (dead.empty()) break;
    for (ValueId v : dead) maybe_dead.erase(v);
    for (FuncDef& f : out.functions) sweep(f.body, dead);
  }

  ValueId next = out.next_value_id();
  for (const FuncDef& f : plan.inserted_funcs)
    out.functions.push_back(renumber(f, next));

  if (auto broken = check_ssa(out))
    throw Error(ErrorKind::BrokenUse, "rewrite left a dangling use: " + *broken);
  return out;
}

}  // namespace smr
