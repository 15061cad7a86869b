// SPDX-License-Identifier: Apache-2.0

#include "gen.h"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace smr::testing {

namespace {

const Type kI1{"i1"}, kI64{"i64"}, kF64{"f64"}, kMemF{"memref<f64>"},
    kMemI{"memref<i64>"};

const char* const kPredicates[] = {"eq", "ne", "slt", "sle", "sgt", "sge"};

Operation make_op(std::string name, std::vector<ValueId> operands,
                  std::optional<std::pair<ValueId, Type>> result = std::nullopt) {
  Operation op;
  op.name = std::move(name);
  op.operands = std::move(operands);
  if (result) op.results.push_back(Result{result->first, result->second});
  return op;
}

Operation terminator(const char* name) { return make_op(name, {}); }

class Generator {
 public:
  Generator(Rng& rng, const GenOptions& opts) : rng_(rng), opts_(opts) {}

  ModuleIR run() {
    FuncDef f;
    f.name = "f";
    const std::pair<const char*, Type> params[] = {
        {"n", kI64},   {"a", kMemF}, {"b", kMemF}, {"c", kMemF},
        {"p", kMemI},  {"q", kMemI}, {"s", kF64},
    };
    for (const auto& [name, type] : params) {
      ValueId id = next_++;
      f.params.push_back(Param{id, name, type});
      define(id, type);
    }
    f.body.blocks.emplace_back();
    Block& b = f.body.blocks.back();
    b.ops.push_back(constant(0));
    b.ops.push_back(constant(1));
    used_ = 3;  // two constants and the return
    fill(b, 0);
    b.ops.push_back(terminator("core.return"));
    ModuleIR m;
    m.functions.push_back(std::move(f));
    dce(m);
    return m;
  }

 private:
  template <typename T>
  T pick(const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng_)];
  }
  int roll(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::vector<ValueId> visible(const Type& t) const {
    std::vector<ValueId> out;
    for (const auto& [id, type] : scope_)
      if (type == t) out.push_back(id);
    return out;
  }

  Operation constant(std::int64_t v) {
    ValueId id = next_++;
    Operation op = make_op("core.constant", {}, std::make_pair(id, kI64));
    op.attributes["value"] = IntAttr{v, kI64};
    define(id, kI64);
    return op;
  }

  Operation fconstant(double v) {
    ValueId id = next_++;
    Operation op = make_op("core.constant", {}, std::make_pair(id, kF64));
    op.attributes["value"] = FloatAttr{v, kF64};
    define(id, kF64);
    return op;
  }

  Operation with_result(std::string name, std::vector<ValueId> operands, const Type& t) {
    ValueId id = next_++;
    define(id, t);
    return make_op(std::move(name), std::move(operands), std::make_pair(id, t));
  }

  void define(ValueId id, const Type& t) {
    scope_.emplace_back(id, t);
    types_[id] = t;
  }

  bool room(std::size_t n) const { return used_ + n <= opts_.max_ops; }

  /// Appends a few random ops to `b`, leaving room for its terminator.
  void fill(Block& b, int depth) {
    int count = roll(1, depth == 0 ? 7 : 4);
    for (int k = 0; k < count && room(1); ++k) emit(b, depth);
  }

  void emit(Block& b, int depth) {
    std::vector<ValueId> ints = visible(kI64), floats = visible(kF64),
                         bools = visible(kI1);
    int kind = roll(0, 11);
    if (kind >= 10 && depth >= opts_.max_depth) kind = roll(0, 9);
    switch (kind) {
      case 0:
        ++used_;
        b.ops.push_back(chance(0.5) ? constant(roll(0, 3))
                                    : fconstant(pick(std::vector<double>{0.5, 1.0, 2.0})));
        break;
      case 1: {
        ++used_;
        const char* names[] = {"core.addi", "core.subi", "core.muli"};
        b.ops.push_back(with_result(names[roll(0, 2)], {pick(ints), pick(ints)}, kI64));
        break;
      }
      case 2:
      case 3: {
        ++used_;
        const char* names[] = {"core.addf", "core.subf", "core.mulf", "core.divf"};
        b.ops.push_back(with_result(names[roll(0, 3)], {pick(floats), pick(floats)}, kF64));
        break;
      }
      case 4: {
        ++used_;
        Operation op = with_result("core.cmpi", {pick(ints), pick(ints)}, kI1);
        op.attributes["predicate"] = StringAttr{kPredicates[roll(0, 5)]};
        b.ops.push_back(std::move(op));
        break;
      }
      case 5:
        ++used_;
        b.ops.push_back(with_result("core.load", {pick(visible(kMemF)), pick(ints)}, kF64));
        break;
      case 6:
        ++used_;
        b.ops.push_back(with_result("core.load", {pick(visible(kMemI)), pick(ints)}, kI64));
        break;
      case 7:
      case 8:
        ++used_;
        b.ops.push_back(make_op("core.store", {pick(floats), pick(visible(kMemF)), pick(ints)}));
        break;
      case 9:
        ++used_;
        b.ops.push_back(make_op("core.store", {pick(ints), pick(visible(kMemI)), pick(ints)}));
        break;
      default:
        if (!rdos_.empty() && chance(opts_.clone_prob) && clone(b, depth)) break;
        if (kind == 10) emit_if(b, depth, bools, ints);
        else emit_for(b, depth, ints);
        break;
    }
  }

  void emit_if(Block& b, int depth, const std::vector<ValueId>& bools,
               const std::vector<ValueId>& ints) {
    if (!room(3)) return;
    ValueId cond;
    if (bools.empty() || chance(0.5)) {
      Operation cmp = with_result("core.cmpi", {pick(ints), pick(ints)}, kI1);
      cmp.attributes["predicate"] = StringAttr{kPredicates[roll(0, 5)]};
      cond = cmp.results[0].id;
      b.ops.push_back(std::move(cmp));
      ++used_;
    } else {
      cond = pick(bools);
    }
    if (!room(3)) return;
    used_ += 3;
    Operation op = make_op("core.if", {cond});
    for (int r = 0; r < 2; ++r) {
      std::size_t mark = scope_.size();
      Region region;
      region.blocks.emplace_back();
      fill(region.blocks.back(), depth + 1);
      region.blocks.back().ops.push_back(terminator("core.yield"));
      scope_.resize(mark);
      op.regions.push_back(std::move(region));
    }
    rdos_.push_back(op);
    b.ops.push_back(std::move(op));
  }

  void emit_for(Block& b, int depth, const std::vector<ValueId>& ints) {
    if (!room(2)) return;
    used_ += 2;
    Operation op = make_op("core.for", {pick(ints), pick(ints), pick(ints)});
    std::size_t mark = scope_.size();
    Region region;
    region.blocks.emplace_back();
    ValueId iv = next_++;
    region.blocks.back().args.push_back(BlockArg{iv, kI64});
    define(iv, kI64);
    fill(region.blocks.back(), depth + 1);
    region.blocks.back().ops.push_back(terminator("core.yield"));
    scope_.resize(mark);
    op.regions.push_back(std::move(region));
    rdos_.push_back(op);
    b.ops.push_back(std::move(op));
  }

  /// Copies an earlier RDO into `b`, rewiring inputs that are not visible
  /// here (and occasionally one that is) to a visible value of that type.
  static int nesting(const Operation& op) {
    int deepest = 0;
    for (const Region& r : op.regions)
      walk_ops(r, [&](const Operation& inner) {
        if (!inner.regions.empty()) deepest = std::max(deepest, nesting(inner));
      });
    return 1 + deepest;
  }

  bool clone(Block& b, int depth) {
    Operation copy = pick(rdos_);
    if (depth + nesting(copy) > opts_.max_depth) return false;
    std::size_t n = 0;
    std::unordered_set<ValueId> inner;
    auto collect = [&](const Operation& op) {
      ++n;
      for (const Result& r : op.results) inner.insert(r.id);
      for (const Region& r : op.regions)
        for (const Block& bb : r.blocks)
          for (const BlockArg& a : bb.args) inner.insert(a.id);
    };
    collect(copy);
    for (const Region& r : copy.regions) walk_ops(r, collect);
    if (!room(n)) return false;

    std::unordered_set<ValueId> in_scope;
    for (const auto& [id, t] : scope_) in_scope.insert(id);

    std::unordered_map<ValueId, ValueId> remap;
    bool rewired = false;
    auto map_value = [&](ValueId v) -> std::optional<ValueId> {
      if (inner.contains(v)) return v;
      if (auto it = remap.find(v); it != remap.end()) return it->second;
      std::vector<ValueId> alts = visible(types_.at(v));
      ValueId to = v;
      if (!in_scope.contains(v) || (!rewired && chance(opts_.rewire_prob))) {
        if (alts.empty()) return std::nullopt;
        to = pick(alts);
        rewired = true;
      }
      remap[v] = to;
      return to;
    };
    bool ok = true;
    auto fix = [&](Operation& op) {
      for (ValueId& v : op.operands)
        if (auto m = map_value(v)) v = *m;
        else ok = false;
    };
    fix(copy);
    for (Region& r : copy.regions) walk_ops(r, fix);
    if (!ok) return false;

    std::unordered_map<ValueId, ValueId> fresh;
    for (ValueId v : inner) fresh[v] = next_++;
    auto renumber = [&](Operation& op) {
      for (ValueId& v : op.operands)
        if (auto it = fresh.find(v); it != fresh.end()) v = it->second;
      for (Result& r : op.results) {
        r.id = fresh.at(r.id);
        types_[r.id] = r.type;
      }
      for (Region& r : op.regions)
        for (Block& bb : r.blocks)
          for (BlockArg& a : bb.args) {
            a.id = fresh.at(a.id);
            types_[a.id] = a.type;
          }
    };
    renumber(copy);
    for (Region& r : copy.regions) walk_ops(r, renumber);
    used_ += n;
    rdos_.push_back(copy);
    b.ops.push_back(std::move(copy));
    return true;
  }

  static void dce(ModuleIR& m) {
    for (;;) {
      std::unordered_map<ValueId, int> uses;
      for (const FuncDef& f : m.functions)
        walk_ops(f.body, [&](const Operation& op) {
          for (ValueId v : op.operands) ++uses[v];
        });
      std::size_t removed = 0;
      std::function<void(Region&)> sweep = [&](Region& r) {
        for (Block& b : r.blocks) {
          removed += std::erase_if(b.ops, [&](const Operation& op) {
            return op.results.size() == 1 && op.regions.empty() &&
                   !uses.contains(op.results[0].id);
          });
          for (Operation& op : b.ops)
            for (Region& nested : op.regions) sweep(nested);
        }
      };
      for (FuncDef& f : m.functions) sweep(f.body);
      if (removed == 0) return;
    }
  }

  Rng& rng_;
  GenOptions opts_;
  ValueId next_ = 0;
  std::size_t used_ = 0;
  std::vector<std::pair<ValueId, Type>> scope_;
  std::vector<Operation> rdos_;  // snapshots to copy from
  std::unordered_map<ValueId, Type> types_;
};

}  // namespace

ModuleIR random_module(Rng& rng, const GenOptions& opts) {
  return Generator(rng, opts).run();
}

std::size_t count_ops(const ModuleIR& m) {
  std::size_t n = 0;
  for (const FuncDef& f : m.functions) walk_ops(f.body, [&](const Operation&) { ++n; });
  return n;
}

FuncDef excise_pattern(const ModuleIR& m, const Operation& root, Rng& rng,
                       double wildcard_prob, const std::string& name) {
  DefUseIndex index(m);
  std::unordered_set<ValueId> inner;
  std::vector<ValueId> inputs;
  auto note = [&](const Operation& op) {
    for (const Result& r : op.results) inner.insert(r.id);
    for (const Region& r : op.regions)
      for (const Block& b : r.blocks)
        for (const BlockArg& a : b.args) inner.insert(a.id);
  };
  note(root);
  for (const Region& r : root.regions) walk_ops(r, note);
  auto gather = [&](const Operation& op) {
    for (ValueId v : op.operands)
      if (!inner.contains(v) && std::find(inputs.begin(), inputs.end(), v) == inputs.end())
        inputs.push_back(v);
  };
  gather(root);
  for (const Region& r : root.regions) walk_ops(r, gather);

  FuncDef f;
  f.name = name;
  f.body.blocks.emplace_back();
  std::vector<Operation>& body = f.body.blocks.back().ops;
  std::unordered_set<ValueId> done;
  std::function<void(ValueId)> resolve = [&](ValueId v) {
    if (!done.insert(v).second) return;
    const DefSite* def = index.def(v);
    if (def->kind == DefKind::OpResult && def->op->regions.empty() &&
        !std::bernoulli_distribution(wildcard_prob)(rng)) {
      for (ValueId u : def->op->operands) resolve(u);
      body.push_back(*def->op);
      return;
    }
    f.params.push_back(Param{v, "w" + std::to_string(f.params.size()), def->type});
  };
  for (ValueId v : inputs) resolve(v);
  std::shuffle(f.params.begin(), f.params.end(), rng);
  body.push_back(root);
  body.push_back(terminator("core.return"));
  return f;
}

std::string mutate_pattern(FuncDef& pattern, Rng& rng) {
  std::vector<std::function<std::string()>> options;
  walk_ops(pattern.body, [&](Operation& op) {
    Operation* p = &op;
    if (op.name == "core.cmpi") {
      options.push_back([p, &rng] {
        std::string& pred = std::get<StringAttr>(p->attributes["predicate"]).value;
        std::string old = pred;
        while (pred == old)
          pred = kPredicates[std::uniform_int_distribution<int>(0, 5)(rng)];
        return "predicate " + old + " -> " + pred;
      });
    }
    if ((op.name == "core.subi" || op.name == "core.subf" || op.name == "core.divf") &&
        op.operands[0] != op.operands[1]) {
      options.push_back([p] {
        std::swap(p->operands[0], p->operands[1]);
        return "swapped operands of " + p->name;
      });
    }
    if (op.name == "core.constant") {
      options.push_back([p] {
        AttrValue& v = p->attributes["value"];
        if (auto* i = std::get_if<IntAttr>(&v)) i->value += 5;
        else std::get<FloatAttr>(v).value *= 3;
        return std::string("changed constant");
      });
    }
    static const std::map<std::string, std::string> swaps = {
        {"core.addf", "core.mulf"}, {"core.mulf", "core.addf"},
        {"core.addi", "core.muli"}, {"core.muli", "core.addi"}};
    if (auto it = swaps.find(op.name); it != swaps.end()) {
      std::string to = it->second;
      options.push_back([p, to] {
        std::string from = p->name;
        p->name = to;
        return from + " -> " + to;
      });
    }
  });
  if (options.empty()) return {};
  return options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)]();
}

std::string pat_text(const FuncDef& pattern) {
  FuncDef repl;
  repl.name = pattern.name + "_r";
  ValueId id = 0;
  for (const Param& p : pattern.params) repl.params.push_back(Param{id++, p.name, p.type});
  repl.body.blocks.emplace_back();
  repl.body.blocks.back().ops.push_back(terminator("core.return"));
  return "ir {\n" + print_function(pattern) + "} = ir {\n" + print_function(repl) + "}\n";
}

}  // namespace smr::testing
