// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "smr/error.h"
#include "smr/ir.h"

namespace smr::testing {

inline std::string fixture(const std::string& name) {
  std::ifstream in(std::string(SMR_FIXTURES) + "/" + name, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(SMR_FIXTURES) + "/" + name;
}

inline ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an smr::Error");
  return ErrorKind::Syntax;
}

/// Top-level op of the first function at `i`.
inline const Operation& top(const ModuleIR& m, std::size_t i) {
  return m.functions.at(0).body.block().ops.at(i);
}

}  // namespace smr::testing
