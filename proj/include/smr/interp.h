// SPDX-License-Identifier: Apache-2.0
//
// Reference interpreter for the core dialect.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smr/ir.h"

namespace smr {

using Buffer = std::variant<std::vector<double>, std::vector<std::int64_t>>;

struct MemRefHandle {
  std::size_t id = 0;
  friend bool operator==(const MemRefHandle&, const MemRefHandle&) = default;
};

/// Runtime value: i1, i64, f64 or a handle into the buffer table.
using Value = std::variant<bool, std::int64_t, double, MemRefHandle>;

/// Entry argument; buffers are copied into the interpreter's memory.
using InterpArg = std::variant<bool, std::int64_t, double, Buffer>;

struct InterpResult {
  /// Final contents of each memref argument, in parameter order.
  std::vector<Buffer> buffers;
  std::size_t steps = 0;
};

inline constexpr std::size_t kDefaultFuel = 10'000'000;

/// Runs `entry`. Throws UnknownFunction, UnknownOp, InterpTypeMismatch,
/// OutOfBounds or FuelExhausted.
InterpResult interpret_function(const ModuleIR& m, std::string_view entry,
                                const std::vector<InterpArg>& args,
                                std::size_t fuel = kDefaultFuel);

/// Element-wise comparison: exact for integer buffers, relative tolerance
/// `rel_tol` for floating point ones.
bool buffers_close(const Buffer& a, const Buffer& b, double rel_tol = 1e-9);

std::string format_buffer(const Buffer& b);

}  // namespace smr
