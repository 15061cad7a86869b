// SPDX-License-Identifier: Apache-2.0
//
// Generic region-based IR shared by patterns and input programs.
//
// The concrete syntax is a subset of the MLIR generic form:
//
//   func @f(%a: i64, %x: memref<f64>) {
//     %c = "core.constant"() {value = 1 : i64} : () -> i64
//     "core.for"(%c, %a, %c) ({
//     ^(%i: i64):
//       "core.yield"() : () -> ()
//     }) : (i64, i64, i64) -> ()
//     "core.return"() : () -> ()
//   }
//
// Values are identified by module-unique integers. Source names are dropped
// at parse time and re-derived by the printer.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace smr {

using ValueId = std::uint32_t;

/// Textual type such as `i64` or `memref<f64>`. Whitespace is stripped so
/// that equality is plain string equality.
class Type {
 public:
  Type() = default;
  explicit Type(std::string_view text);

  const std::string& str() const noexcept { return text_; }
  bool empty() const noexcept { return text_.empty(); }

  /// Element type of a `memref<...>` type, or an empty type otherwise.
  Type element_type() const;
  bool is_memref() const { return !element_type().empty(); }

  friend bool operator==(const Type&, const Type&) = default;
  friend auto operator<=>(const Type&, const Type&) = default;

 private:
  std::string text_;
};

struct IntAttr {
  std::int64_t value = 0;
  Type type{"i64"};
  friend bool operator==(const IntAttr&, const IntAttr&) = default;
  friend auto operator<=>(const IntAttr&, const IntAttr&) = default;
};

struct FloatAttr {
  double value = 0;
  Type type{"f64"};
  friend bool operator==(const FloatAttr&, const FloatAttr&) = default;
  friend std::partial_ordering operator<=>(const FloatAttr&,
                                           const FloatAttr&) = default;
};

struct StringAttr {
  std::string value;
  friend bool operator==(const StringAttr&, const StringAttr&) = default;
  friend auto operator<=>(const StringAttr&, const StringAttr&) = default;
};

/// Reference to a function symbol, printed as `@name`.
struct SymbolAttr {
  std::string name;
  friend bool operator==(const SymbolAttr&, const SymbolAttr&) = default;
  friend auto operator<=>(const SymbolAttr&, const SymbolAttr&) = default;
};

struct TypeAttr {
  Type type;
  friend bool operator==(const TypeAttr&, const TypeAttr&) = default;
  friend auto operator<=>(const TypeAttr&, const TypeAttr&) = default;
};

using AttrValue =
    std::variant<IntAttr, FloatAttr, StringAttr, SymbolAttr, TypeAttr>;

/// IR syntax of an attribute value, e.g. `1 : i64` or `"eq"`.
std::string format_attr(const AttrValue& value);
/// Compact form used inside graph labels, e.g. `1:i64` or `eq`.
std::string format_attr_compact(const AttrValue& value);

struct Result {
  ValueId id = 0;
  Type type;
};

struct BlockArg {
  ValueId id = 0;
  Type type;
};

struct Operation;

struct Block {
  std::vector<BlockArg> args;
  std::vector<Operation> ops;
};

struct Region {
  std::vector<Block> blocks;

  /// The first block; single-block discipline is checked by
  /// validate_constraints, not enforced here.
  Block& block() { return blocks.front(); }
  const Block& block() const { return blocks.front(); }
  bool empty() const { return blocks.empty() || blocks.front().ops.empty(); }
};

struct Operation {
  std::string name;
  std::vector<ValueId> operands;
  std::vector<Result> results;
  std::map<std::string, AttrValue> attributes;
  std::vector<Region> regions;

  const Result* result() const {
    return results.empty() ? nullptr : &results.front();
  }
  const AttrValue* attr(std::string_view key) const;
};

struct Param {
  ValueId id = 0;
  std::string name;
  Type type;
};

struct FuncDef {
  std::string name;
  std::vector<Param> params;
  Region body;
};

struct ModuleIR {
  std::vector<FuncDef> functions;

  const FuncDef* find(std::string_view name) const;
  /// One past the largest ValueId in use.
  ValueId next_value_id() const;
};

// ---------------------------------------------------------------------------
// Dialect configuration.

struct OpArity {
  std::optional<unsigned> operands;
  std::optional<unsigned> results;
  std::optional<unsigned> regions;
};

struct DialectConfig {
  std::set<std::string> rdo_ops;
  std::set<std::string> terminator_ops;
  std::set<std::string> potential_root_ops;
  std::map<std::string, std::vector<std::string>> match_attrs;
  std::map<std::string, OpArity> arity;

  /// The built-in `core` dialect.
  static DialectConfig core();
  /// Loads a config from its JSON form; throws Error(Config).
  static DialectConfig from_json(std::string_view text);
  std::string to_json() const;

  bool is_rdo(const Operation& op) const { return rdo_ops.contains(op.name); }
  bool is_terminator(const Operation& op) const {
    return terminator_ops.contains(op.name);
  }
  /// Ops that define no SSA value and therefore need a region edge to be
  /// reachable in a data-dependency graph.
  bool is_potential_root(const Operation& op) const;
};

// ---------------------------------------------------------------------------
// Text form.

ModuleIR parse_module(std::string_view text);
std::string print_module(const ModuleIR& m);
std::string print_function(const FuncDef& f);

/// Printed name (`%k`) of every value defined in `f`, in definition order.
std::unordered_map<ValueId, std::string> value_names(const FuncDef& f);

/// Equality modulo a consistent renaming of ValueIds.
bool structurally_equal(const ModuleIR& a, const ModuleIR& b);
bool structurally_equal(const FuncDef& a, const FuncDef& b);
bool structurally_equal(const Region& a, const Region& b);

// ---------------------------------------------------------------------------
// Validation.

enum class ViolationKind {
  MultiBlockRegion,
  MultiResult,
  ArityMismatch,
  MissingTerminator,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string function;
  std::string op_path;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::vector<Violation> validate_constraints(const ModuleIR& m,
                                            const DialectConfig& cfg);
std::vector<Violation> validate_constraints(const FuncDef& f,
                                            const DialectConfig& cfg);

/// Returns a description of the first operand that does not resolve to a
/// visible definition, or nothing when SSA scoping holds.
std::optional<std::string> check_ssa(const ModuleIR& m);

// ---------------------------------------------------------------------------
// Def-use index.

enum class DefKind { OpResult, BlockArg, FuncParam };

struct DefSite {
  DefKind kind = DefKind::OpResult;
  const Operation* op = nullptr;       // OpResult
  const Region* region = nullptr;      // BlockArg: owning region
  const FuncDef* function = nullptr;   // always set
  unsigned index = 0;                  // block-arg or param position
  Type type;
};

struct Use {
  const Operation* user = nullptr;
  unsigned operand = 0;
};

/// Def-use chains plus the parent structure of every operation. Holds
/// pointers into the indexed IR, which must outlive it and stay unmodified.
class DefUseIndex {
 public:
  DefUseIndex() = default;
  explicit DefUseIndex(const ModuleIR& m);
  explicit DefUseIndex(const FuncDef& f);

  const DefSite* def(ValueId v) const;
  const std::vector<Use>& uses(ValueId v) const;
  const std::unordered_map<ValueId, DefSite>& defs() const { return defs_; }

  const Operation* parent_op(const Operation* op) const;
  const Region* parent_region(const Operation* op) const;
  const FuncDef* function_of(const Operation* op) const;
  /// Pre-order position of `op` across the indexed IR.
  std::size_t order(const Operation* op) const;
  /// Stable path such as `3` or `2.B.0` (op index, region letter, ...).
  std::string path(const Operation* op) const;
  /// Every operation in pre-order.
  const std::vector<const Operation*>& operations() const { return ops_; }

 private:
  struct OpInfo {
    const Operation* parent = nullptr;
    const Region* region = nullptr;
    const FuncDef* function = nullptr;
    std::size_t order = 0;
    std::string path;
  };

  void add_function(const FuncDef& f);
  void walk(const Region& r, const Operation* parent, const FuncDef& f,
            const std::string& prefix);

  std::unordered_map<ValueId, DefSite> defs_;
  std::unordered_map<ValueId, std::vector<Use>> uses_;
  std::unordered_map<const Operation*, OpInfo> info_;
  std::vector<const Operation*> ops_;
};

inline DefUseIndex build_def_use(const ModuleIR& m) { return DefUseIndex(m); }

/// Calls `fn(op)` for every operation nested in `r`, in pre-order.
template <typename Fn>
void walk_ops(const Region& r, Fn&& fn) {
  for (const Block& b : r.blocks)
    for (const Operation& op : b.ops) {
      fn(op);
      for (const Region& nested : op.regions) walk_ops(nested, fn);
    }
}

template <typename Fn>
void walk_ops(Region& r, Fn&& fn) {
  for (Block& b : r.blocks)
    for (Operation& op : b.ops) {
      fn(op);
      for (Region& nested : op.regions) walk_ops(nested, fn);
    }
}

}  // namespace smr
