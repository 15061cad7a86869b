// SPDX-License-Identifier: Apache-2.0
//
// Call-based rewriting. Each selected match root is replaced in place by
//
//   "core.call"(%args...) {callee = @replacement} : (...) -> ()
//
// and the replacement wrapper is appended to the module once per pattern.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "smr/ddg.h"
#include "smr/ir.h"
#include "smr/pat.h"

namespace smr {

struct RewritePlan {
  std::vector<Binding> selected;
  /// Replacement wrappers to append, already renamed, in PAT order.
  std::vector<FuncDef> inserted_funcs;
  /// Replacement wrapper name -> name used in the module.
  std::map<std::string, std::string> renames;
  std::vector<std::string> diagnostics;
};

/// Greedy selection in program order of the match roots. A match is dropped
/// when its root subtree shares an op with an already selected one; at the
/// same root the earlier pattern wins.
std::vector<Binding> select_nonoverlapping(
    const std::vector<std::vector<Binding>>& matches, const DefUseIndex& index,
    std::vector<std::string>* diagnostics = nullptr);

/// Selects matches and resolves replacement names against `m`.
RewritePlan plan_rewrite(const ModuleIR& m,
                         const std::vector<std::vector<Binding>>& matches,
                         const PatFile& pats, const DefUseIndex& index);

/// Returns a rewritten copy of `m`. Bindings in `plan` must point into `m`.
/// Throws BrokenUse if the result would reference a deleted value.
ModuleIR apply_rewrite(const ModuleIR& m, const RewritePlan& plan,
                       const PatFile& pats);

}  // namespace smr
