// SPDX-License-Identifier: Apache-2.0
//
// Structural constraints the matcher relies on, plus SSA scoping checks.

#include <unordered_set>

#include "smr/ir.h"

namespace smr {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::MultiBlockRegion: return "MultiBlockRegion";
    case ViolationKind::MultiResult: return "MultiResult";
    case ViolationKind::ArityMismatch: return "ArityMismatch";
    case ViolationKind::MissingTerminator: return "MissingTerminator";
  }
  return "Violation";
}

namespace {

class Validator {
 public:
  Validator(const FuncDef& f, const DialectConfig& cfg,
            std::vector<Violation>& out)
      : f_(f), cfg_(cfg), out_(out) {}

  void run() { region(f_.body, "", "function body"); }

 private:
  void report(ViolationKind kind, const std::string& path, std::string msg) {
    out_.push_back(Violation{kind, f_.name, path, std::move(msg)});
  }

  void region(const Region& r, const std::string& prefix,
              const std::string& where) {
    if (r.blocks.size() > 1)
      report(ViolationKind::MultiBlockRegion,
             prefix.empty() ? "" : prefix.substr(0, prefix.size() - 1),
             where + " has " + std::to_string(r.blocks.size()) +
                 " blocks; regions must contain exactly one basic block");
    std::size_t position = 0;
    for (const Block& b : r.blocks) {
      if (b.ops.empty())
        report(ViolationKind::MissingTerminator,
               prefix.empty() ? "" : prefix.substr(0, prefix.size() - 1),
               where + " has an empty block");
      else if (!cfg_.is_terminator(b.ops.back()))
        report(ViolationKind::MissingTerminator,
               prefix + std::to_string(position + b.ops.size() - 1),
               where + " does not end in a terminator");
      for (const Operation& o : b.ops) op(o, prefix + std::to_string(position++));
    }
  }

  void op(const Operation& o, const std::string& path) {
    if (o.results.size() > 1)
      report(ViolationKind::MultiResult, path,
             "'" + o.name + "' defines " + std::to_string(o.results.size()) +
                 " results; operations must define at most one result");
    if (auto it = cfg_.arity.find(o.name); it != cfg_.arity.end()) {
      const OpArity& a = it->second;
      auto check = [&](const std::optional<unsigned>& want, std::size_t got,
                       const char* what) {
        if (want && *want != got)
          report(ViolationKind::ArityMismatch, path,
                 "'" + o.name + "' has " + std::to_string(got) + " " + what +
                     ", expected " + std::to_string(*want));
      };
      check(a.operands, o.operands.size(), "operands");
      // Multi-result ops are already reported above.
      if (o.results.size() <= 1) check(a.results, o.results.size(), "results");
      check(a.regions, o.regions.size(), "regions");
    }
    for (std::size_t i = 0; i < o.regions.size(); ++i)
      region(o.regions[i], path + "." + std::string(1, char('A' + i)) + ".",
             "region " + std::string(1, char('A' + i)) + " of '" + o.name + "'");
  }

  const FuncDef& f_;
  const DialectConfig& cfg_;
  std::vector<Violation>& out_;
};

}  // namespace

std::vector<Violation> validate_constraints(const FuncDef& f,
                                            const DialectConfig& cfg) {
  std::vector<Violation> out;
  Validator(f, cfg, out).run();
  return out;
}

std::vector<Violation> validate_constraints(const ModuleIR& m,
                                            const DialectConfig& cfg) {
  std::vector<Violation> out;
  for (const FuncDef& f : m.functions) Validator(f, cfg, out).run();
  return out;
}

namespace {

struct ScopeChecker {
  std::vector<std::unordered_set<ValueId>> scopes;
  std::unordered_set<ValueId> seen;
  std::optional<std::string> error;
  const FuncDef* fn = nullptr;

  bool visible(ValueId v) const {
    for (const auto& s : scopes)
      if (s.contains(v)) return true;
    return false;
  }

  void define(ValueId v) {
    if (!seen.insert(v).second && !error)
      error = "@" + fn->name + ": value " + std::to_string(v) +
              " defined more than once";
    scopes.back().insert(v);
  }

  void region(const Region& r) {
    scopes.emplace_back();
    for (const Block& b : r.blocks) {
      for (const BlockArg& a : b.args) define(a.id);
      for (const Operation& op : b.ops) {
        for (ValueId v : op.operands)
          if (!visible(v) && !error)
            error = "@" + fn->name + ": '" + op.name + "' uses value " +
                    std::to_string(v) + " which has no visible definition";
        for (const Region& nested : op.regions) region(nested);
        for (const Result& res : op.results) define(res.id);
      }
    }
    scopes.pop_back();
  }
};

}  // namespace

std::optional<std::string> check_ssa(const ModuleIR& m) {
  std::unordered_set<ValueId> module_ids;
  for (const FuncDef& f : m.functions) {
    ScopeChecker c;
    c.fn = &f;
    c.scopes.emplace_back();
    for (const Param& p : f.params) c.define(p.id);
    c.region(f.body);
    if (c.error) return c.error;
    for (ValueId v : c.seen)
      if (!module_ids.insert(v).second)
        return "@" + f.name + ": value " + std::to_string(v) +
               " is also defined in another function";
  }
  return std::nullopt;
}

}  // namespace smr
