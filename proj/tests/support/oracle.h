// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference matcher working directly on the IR. It shares no
// code with the control/data-string pipeline: the candidate must have the
// same region shape as the pattern (RDO nesting and where non-RDO runs
// sit), and there must be an injective op mapping that respects names,
// significant attributes, result types, region placement and operand
// wiring, with wrapper arguments binding values from outside the candidate.

#pragma once

#include <set>
#include <vector>

#include "smr/ir.h"
#include "smr/pat.h"

namespace smr::testing {

bool oracle_shape_equal(const Operation& pattern_root, const Operation& candidate,
                        const DialectConfig& cfg);

bool oracle_match(const PatternPair& pattern, const Operation& candidate,
                  const DefUseIndex& index, const DialectConfig& cfg);

/// Every RDO of `m` that `pattern` matches, in pre-order.
std::vector<const Operation*> oracle_roots(const PatternPair& pattern,
                                           const ModuleIR& m,
                                           const DialectConfig& cfg);

}  // namespace smr::testing
