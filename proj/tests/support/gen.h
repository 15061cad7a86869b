// SPDX-License-Identifier: Apache-2.0
//
// Random core-dialect modules and patterns excised from them.

#pragma once

#include <cstddef>
#include <random>
#include <string>

#include "smr/ir.h"

namespace smr::testing {

using Rng = std::mt19937_64;

struct GenOptions {
  std::size_t max_ops = 50;
  int max_depth = 3;
  /// Chance that a new RDO is a copy of an earlier one.
  double clone_prob = 0.35;
  /// Chance that a copied RDO rewires one of its inputs.
  double rewire_prob = 0.3;
};

/// One function `@f` with no dead ops. Every op counts toward max_ops.
ModuleIR random_module(Rng& rng, const GenOptions& opts = {});

std::size_t count_ops(const ModuleIR& m);

/// Pattern wrapper for the fragment rooted at `root`. Each value flowing in
/// from outside becomes a wrapper argument with probability
/// `wildcard_prob`; otherwise its producer is copied in front of the root.
FuncDef excise_pattern(const ModuleIR& m, const Operation& root, Rng& rng,
                       double wildcard_prob, const std::string& name);

/// Applies one semantic change (predicate flip, operand swap of a
/// non-commutative op, constant change or op swap). Returns a description,
/// or an empty string when the pattern has nothing to mutate.
std::string mutate_pattern(FuncDef& pattern, Rng& rng);

/// PAT text pairing `pattern` with an empty replacement of the same
/// signature.
std::string pat_text(const FuncDef& pattern);

}  // namespace smr::testing
